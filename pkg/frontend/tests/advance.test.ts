import { describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { createAdvanceControl } from '../src/controls.js';
import { renderRunDashboard } from '../src/dashboard.js';
import { MockServer } from './mockApi.js';
import { RUN_ID } from './fixtures.js';

function mount(): HTMLElement {
  const root = document.createElement('div');
  document.body.appendChild(root);
  return root;
}

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

describe('advance control', () => {
  it('issues exactly one mutation when double-triggered', async () => {
    const mock = new MockServer();
    mock.busyPolls = 2;
    const api = new ApiClient('', mock.fetch);
    const control = createAdvanceControl(mount(), api, RUN_ID, { pollIntervalMs: 1 });

    await Promise.all([control.trigger(), control.trigger()]);
    expect(mock.callsTo('/advance').length).toBe(1);
    expect(control.status.textContent).toBe('done');
    expect(control.button.disabled).toBe(false);

    // same guarantee through the DOM: a double click fires one request
    mock.calls = [];
    mock.busyPolls = 2;
    control.button.click();
    control.button.click();
    expect(control.button.disabled).toBe(true);
    while (control.status.textContent === 'advancing') await sleep(1);
    expect(mock.callsTo('/advance').length).toBe(1);
  });

  it('reports a busy stage without leaving the button stuck', async () => {
    const mock = new MockServer();
    mock.advanceBusy = true;
    const api = new ApiClient('', mock.fetch);
    const control = createAdvanceControl(mount(), api, RUN_ID);

    await control.trigger();
    expect(control.status.textContent).toBe('stage busy');
    expect(control.button.disabled).toBe(false);

    // the handle frees up and the next trigger goes through
    mock.advanceBusy = false;
    await control.trigger();
    expect(control.status.textContent).toBe('done');
  });

  it('refreshes the dashboard once the background advance settles', async () => {
    const mock = new MockServer();
    const api = new ApiClient('', mock.fetch);
    const dash = await renderRunDashboard(mount(), api, RUN_ID);
    expect(dash.candidates.length).toBe(3);

    mock.busyPolls = 3;
    const control = createAdvanceControl(mount(), api, RUN_ID, {
      pollIntervalMs: 1,
      onDone: () => dash.refresh(),
    });
    await control.trigger();

    expect(mock.callsTo('/advance').length).toBe(1);
    expect(dash.candidates.length).toBe(4);
    expect(dash.rowIds()).toContain('ID-104');
  });
});
