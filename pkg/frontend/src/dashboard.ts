// Run dashboard: stage timeline, PCA scatter of the surviving sets, and a
// sortable candidate grid.  Every number is printed with String(value) so the
// screen shows exactly what the server sent.

import type { ApiClient } from './api.js';
import { pcaScatter } from './charts.js';
import type { CandidateSummary, PcaDoc, RunState } from './types.js';

export function show(value: number | string | null | undefined): string {
  return value === null || value === undefined ? '-' : String(value);
}

export type SortKey = 'u_comb' | 'tail_mean' | 'rating';

export interface DashboardHandle {
  state: RunState;
  candidates: CandidateSummary[];
  refresh(): Promise<void>;
  sortBy(key: SortKey): void;
  rowIds(): string[];
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

function renderTimeline(state: RunState): HTMLElement {
  const wrap = el('section', 'stage-timeline');
  wrap.appendChild(el('h2', undefined, `run ${state.run_id} (${state.status})`));
  const list = el('ol');
  for (const s of state.stages) {
    const item = el('li', 'stage-entry');
    item.dataset.stage = String(s.stage);
    item.textContent = `stage ${s.stage} ${s.kind}: ${show(s.members)} members, ${show(s.surviving)} surviving`;
    list.appendChild(item);
  }
  wrap.appendChild(list);
  if (state.pending_decisions > 0) {
    wrap.appendChild(el('p', 'pending', `${state.pending_decisions} decisions pending`));
  }
  return wrap;
}

const GRID_COLUMNS: { key: keyof CandidateSummary; label: string; sortable: boolean }[] = [
  { key: 'id', label: 'id', sortable: false },
  { key: 'status', label: 'status', sortable: false },
  { key: 'cl', label: 'CL', sortable: false },
  { key: 'cd', label: 'CD', sortable: false },
  { key: 'cm', label: 'CM', sortable: false },
  { key: 'u_comb', label: 'u_comb', sortable: true },
  { key: 'tail_mean', label: 'tail_mean', sortable: true },
  { key: 'rating', label: 'rating', sortable: true },
];

export async function renderRunDashboard(
  root: HTMLElement,
  api: ApiClient,
  runId: string,
  onSelect?: (cid: string) => void,
): Promise<DashboardHandle> {
  let state = await api.state(runId);
  let candidates: CandidateSummary[] = [];
  let pca: PcaDoc = { stages: {}, explained_variance: [] };
  let order: CandidateSummary[] = [];

  async function load(): Promise<void> {
    state = await api.state(runId);
    if (state.last_stage === 0) {
      candidates = [];
      pca = { stages: {}, explained_variance: [] };
    } else {
      [candidates, pca] = await Promise.all([
        api.candidates(runId).then((doc) => doc.candidates),
        api.pca(runId),
      ]);
    }
    order = [...candidates];
  }

  function paintGridBody(tbody: HTMLTableSectionElement): void {
    tbody.textContent = '';
    for (const c of order) {
      const row = el('tr', 'candidate-row');
      row.dataset.id = c.id;
      for (const col of GRID_COLUMNS) {
        row.appendChild(el('td', `col-${col.key}`, show(c[col.key] as number | string | null)));
      }
      if (onSelect) row.addEventListener('click', () => onSelect(c.id));
      tbody.appendChild(row);
    }
  }

  function paint(): void {
    root.textContent = '';
    root.appendChild(renderTimeline(state));

    if (state.last_stage === 0 || candidates.length === 0) {
      root.appendChild(el('p', 'empty-state', 'No candidates yet: advance the run to populate the set.'));
      return;
    }

    const scatterWrap = el('section', 'pca-section');
    scatterWrap.appendChild(el('h3', undefined, 'design set per stage (2-component projection)'));
    scatterWrap.appendChild(pcaScatter(pca));
    root.appendChild(scatterWrap);

    const gridWrap = el('section', 'grid-section');
    const table = el('table', 'candidate-grid');
    const thead = document.createElement('thead');
    const headRow = el('tr');
    for (const col of GRID_COLUMNS) {
      const th = el('th', col.sortable ? 'sortable' : undefined, col.label);
      th.dataset.key = col.key;
      if (col.sortable) th.addEventListener('click', () => handle.sortBy(col.key as SortKey));
      headRow.appendChild(th);
    }
    thead.appendChild(headRow);
    table.appendChild(thead);
    const tbody = document.createElement('tbody');
    paintGridBody(tbody);
    table.appendChild(tbody);
    gridWrap.appendChild(table);
    root.appendChild(gridWrap);
  }

  const handle: DashboardHandle = {
    get state() {
      return state;
    },
    get candidates() {
      return candidates;
    },
    async refresh() {
      await load();
      paint();
    },
    sortBy(key: SortKey) {
      // descending, nulls last, id as the deterministic tiebreak
      order = [...candidates].sort((a, b) => {
        const av = a[key];
        const bv = b[key];
        if (av === null && bv === null) return a.id.localeCompare(b.id);
        if (av === null) return 1;
        if (bv === null) return -1;
        if (av !== bv) return bv - av;
        return a.id.localeCompare(b.id);
      });
      const tbody = root.querySelector('tbody');
      if (tbody) paintGridBody(tbody);
    },
    rowIds() {
      return Array.from(root.querySelectorAll('tr.candidate-row')).map(
        (row) => (row as HTMLElement).dataset.id ?? '',
      );
    },
  };

  await load();
  paint();
  return handle;
}
