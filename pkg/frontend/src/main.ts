// Standalone bootstrap: wires the dashboard, advance control and candidate
// panel into #app when served next to the review API.

import { ApiClient } from './api.js';
import { renderCandidateDetail } from './candidate.js';
import { createAdvanceControl } from './controls.js';
import { renderRunDashboard } from './dashboard.js';

const PARAM_NAMES = [
  'CST_U1', 'CST_U2', 'CST_U3', 'CST_U4', 'CST_U5',
  'CST_L2', 'CST_L3', 'CST_L4', 'CST_L5',
];

export async function boot(root: HTMLElement, api = new ApiClient()): Promise<void> {
  const runs = await api.listRuns();
  if (runs.runs.length === 0) {
    root.textContent = 'No runs found. Create one with the CLI, then reload.';
    return;
  }
  const runId = runs.runs[0].run_id;

  const controls = document.createElement('div');
  controls.className = 'controls';
  const dashRoot = document.createElement('div');
  dashRoot.className = 'dashboard';
  const detailRoot = document.createElement('div');
  detailRoot.className = 'detail';
  root.append(controls, dashRoot, detailRoot);

  const dashboard = await renderRunDashboard(dashRoot, api, runId, async (candidateId) => {
    const detail = await api.candidate(runId, candidateId);
    renderCandidateDetail(detailRoot, api, detail, PARAM_NAMES);
  });
  createAdvanceControl(controls, api, runId, { onDone: () => dashboard.refresh() });
}

const appRoot = typeof document !== 'undefined' ? document.getElementById('app') : null;
if (appRoot) {
  void boot(appRoot);
}
