// Run controls: advance the stage machine and poll until the worker settles.
// The in-flight flag is set synchronously before any await so a double click
// (or keyboard repeat) issues exactly one mutation.

import { ApiClient, ApiError } from './api.js';

export interface AdvanceControl {
  button: HTMLButtonElement;
  status: HTMLElement;
  trigger(): Promise<void>;
}

export interface AdvanceOptions {
  pollIntervalMs?: number;
  maxPolls?: number;
  onDone?: () => void | Promise<void>;
}

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export function createAdvanceControl(
  root: HTMLElement,
  api: ApiClient,
  runId: string,
  opts: AdvanceOptions = {},
): AdvanceControl {
  const button = document.createElement('button');
  button.className = 'advance-button';
  button.textContent = 'advance';
  const status = document.createElement('span');
  status.className = 'advance-status';
  status.textContent = 'idle';
  root.appendChild(button);
  root.appendChild(status);

  const interval = opts.pollIntervalMs ?? 25;
  const maxPolls = opts.maxPolls ?? 400;
  let inFlight = false;

  async function trigger(): Promise<void> {
    if (inFlight) return;
    inFlight = true; // set before the first await: re-entry sees it
    button.disabled = true;
    status.textContent = 'advancing';
    try {
      const response = await api.advance(runId);
      if (response.state === 'running') {
        let polls = 0;
        for (;;) {
          const state = await api.state(runId);
          if (!state.busy) break;
          polls += 1;
          if (polls > maxPolls) throw new Error('advance did not settle');
          await sleep(interval);
        }
      }
      status.textContent = 'done';
      if (opts.onDone) await opts.onDone();
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        status.textContent = 'stage busy';
      } else {
        status.textContent = `error: ${err instanceof Error ? err.message : String(err)}`;
      }
    } finally {
      inFlight = false;
      button.disabled = false;
    }
  }

  button.addEventListener('click', () => void trigger());
  return { button, status, trigger };
}
