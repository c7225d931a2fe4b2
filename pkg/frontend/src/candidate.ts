// Candidate detail panel: outline, Cp overlay against the benchmark, the
// metric/utility table, risk badge, machine rating and assessment, and the
// verdict form with a directive builder.  Decisions apply optimistically and
// reconcile with the server's recorded copy; a failed POST flips into an
// explicit retry state instead of silently dropping the verdict.

import { ApiClient } from './api.js';
import { airfoilOutline, cpOverlay } from './charts.js';
import { show } from './dashboard.js';
import type { CandidateDetail, CandidateView, Directive, ReviewDecision } from './types.js';

export function toCandidateView(detail: CandidateDetail): CandidateView {
  return {
    id: detail.id,
    stage: detail.stage,
    status: detail.status,
    outline: detail.geometry.loop,
    cp: detail.cp,
    benchmarkCp: detail.benchmark_cp,
    coefficients: detail.coefficients,
    utility: detail.utility,
    risk: detail.risk,
    rating: detail.rating ? detail.rating.rating : null,
    assessment: detail.assessment,
    humanVerdict: detail.human_verdict,
    pca: detail.pca,
  };
}

/** Builds directives constrained to the server's parameter names. */
export class DirectiveBuilder {
  readonly directives: Directive[] = [];

  constructor(readonly paramNames: string[]) {}

  add(param: string, direction: 'increase' | 'decrease', magnitude: number | null = null): Directive {
    if (!this.paramNames.includes(param)) {
      throw new Error(`unknown parameter ${param}; choose one of ${this.paramNames.join(', ')}`);
    }
    if (magnitude !== null && !(magnitude > 0 && magnitude <= 0.5)) {
      throw new Error('magnitude must be a fraction of the parameter range in (0, 0.5]');
    }
    const directive: Directive = { param, direction, magnitude };
    this.directives.push(directive);
    return directive;
  }
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

function metricTable(view: CandidateView): HTMLTableElement {
  const table = el('table', 'metric-table');
  const rows: [string, number | null, number | null][] = [
    ['CD', view.coefficients?.cd ?? null, view.utility?.u_cd ?? null],
    ['CL', view.coefficients?.cl ?? null, view.utility?.u_cl ?? null],
    ['CM', view.coefficients?.cm ?? null, view.utility?.u_cm ?? null],
  ];
  const head = el('tr');
  for (const label of ['metric', 'value', 'utility']) head.appendChild(el('th', undefined, label));
  table.appendChild(head);
  for (const [name, value, utility] of rows) {
    const row = el('tr', `metric-${name.toLowerCase()}`);
    row.appendChild(el('td', undefined, name));
    row.appendChild(el('td', 'metric-value', show(value)));
    row.appendChild(el('td', 'metric-utility', show(utility)));
    table.appendChild(row);
  }
  const total = el('tr', 'metric-u-comb');
  total.appendChild(el('td', undefined, 'u_comb'));
  const span = el('td', 'metric-value', show(view.utility?.u_comb ?? null));
  span.colSpan = 2;
  total.appendChild(span);
  table.appendChild(total);
  return table;
}

function riskBadge(view: CandidateView): HTMLElement {
  if (!view.risk) return el('span', 'risk-badge risk-missing', 'no risk data');
  const ok = view.risk.pass;
  const badge = el(
    'span',
    `risk-badge ${ok ? 'risk-pass' : 'risk-fail'}`,
    `tail mean ${show(view.risk.tail_mean)} ${ok ? 'clears' : 'misses'} target`,
  );
  return badge;
}

export interface DetailHandle {
  view: CandidateView;
  builder: DirectiveBuilder;
  decide(verdict: 'valid' | 'invalid', note?: string): Promise<void>;
  retryPending(): boolean;
}

export function renderCandidateDetail(
  root: HTMLElement,
  api: ApiClient,
  detail: CandidateDetail,
  paramNames: string[],
  actor = 'reviewer',
): DetailHandle {
  const view = toCandidateView(detail);
  const builder = new DirectiveBuilder(paramNames);

  root.textContent = '';
  const header = el('header', 'candidate-header');
  header.appendChild(el('h2', undefined, `${view.id} (stage ${view.stage})`));
  const statusBadge = el('span', `status-badge status-${view.status}`, view.status);
  header.appendChild(statusBadge);
  header.appendChild(riskBadge(view));
  header.appendChild(el('span', 'rating-badge', `pressure rating ${show(view.rating)}/5`));
  root.appendChild(header);

  const charts = el('section', 'candidate-charts');
  charts.appendChild(airfoilOutline(view.outline));
  charts.appendChild(cpOverlay(view.cp, view.benchmarkCp));
  root.appendChild(charts);

  root.appendChild(metricTable(view));
  if (view.assessment) root.appendChild(el('p', 'assessment', view.assessment));
  if (view.pca) root.appendChild(el('p', 'pca-coords', `projection: [${String(view.pca[0])}, ${String(view.pca[1])}]`));
  if (view.humanVerdict) {
    root.appendChild(
      el('p', 'human-verdict', `${view.humanVerdict.actor}: ${view.humanVerdict.verdict} ${view.humanVerdict.note}`),
    );
  }

  // -- verdict form ----------------------------------------------------------
  const form = el('section', 'verdict-form');
  const note = el('textarea', 'note-input');
  const paramSelect = el('select', 'directive-param');
  for (const name of paramNames) {
    const option = el('option', undefined, name);
    option.value = name;
    paramSelect.appendChild(option);
  }
  const directionSelect = el('select', 'directive-direction');
  for (const dir of ['increase', 'decrease']) {
    const option = el('option', undefined, dir);
    option.value = dir;
    directionSelect.appendChild(option);
  }
  const magnitude = el('input', 'directive-magnitude');
  magnitude.type = 'number';
  magnitude.step = '0.01';
  magnitude.min = '0';
  magnitude.max = '0.5';
  const directiveList = el('ul', 'directives');
  const addButton = el('button', 'add-directive', 'add directive');
  addButton.addEventListener('click', () => {
    const mag = magnitude.value === '' ? null : Number(magnitude.value);
    const directive = builder.add(paramSelect.value, directionSelect.value as 'increase' | 'decrease', mag);
    directiveList.appendChild(
      el('li', 'directive-entry', `${directive.direction} ${directive.param}` + (mag !== null ? ` by ${mag}` : '')),
    );
  });

  const retryBox = el('div', 'retry-box');
  retryBox.hidden = true;
  let pendingRetry: (() => Promise<void>) | null = null;
  const retryButton = el('button', 'retry-button', 'retry');
  retryButton.addEventListener('click', () => {
    if (pendingRetry) void pendingRetry();
  });
  retryBox.appendChild(el('span', 'retry-message', 'decision not recorded (offline?)'));
  retryBox.appendChild(retryButton);

  async function decide(verdict: 'valid' | 'invalid', noteText?: string): Promise<void> {
    const previous = view.status;
    // optimistic: the badge flips immediately, the server reconciles it
    view.status = verdict;
    statusBadge.textContent = verdict;
    statusBadge.className = `status-badge status-${verdict}`;
    const decision: ReviewDecision = {
      candidate_id: view.id,
      verdict,
      note: noteText ?? note.value,
      directives: builder.directives,
      actor,
    };
    try {
      const recorded = await api.decide(detail.run_id, decision);
      view.status = recorded.verdict;
      view.humanVerdict = { verdict: recorded.verdict, actor: recorded.actor, note: recorded.note };
      statusBadge.textContent = recorded.verdict;
      statusBadge.className = `status-badge status-${recorded.verdict}`;
      retryBox.hidden = true;
      pendingRetry = null;
    } catch (err) {
      view.status = previous;
      statusBadge.textContent = previous;
      statusBadge.className = `status-badge status-${previous}`;
      pendingRetry = () => decide(verdict, noteText);
      retryBox.hidden = false;
      throw err;
    }
  }

  const validButton = el('button', 'verdict-valid', 'valid');
  validButton.addEventListener('click', () => void decide('valid').catch(() => undefined));
  const invalidButton = el('button', 'verdict-invalid', 'invalid');
  invalidButton.addEventListener('click', () => void decide('invalid').catch(() => undefined));

  form.appendChild(note);
  form.appendChild(paramSelect);
  form.appendChild(directionSelect);
  form.appendChild(magnitude);
  form.appendChild(addButton);
  form.appendChild(directiveList);
  form.appendChild(validButton);
  form.appendChild(invalidButton);
  form.appendChild(retryBox);
  root.appendChild(form);

  return {
    view,
    builder,
    decide,
    retryPending: () => !retryBox.hidden,
  };
}
