// Thin fetch wrapper over the run service.  The fetch function is injected so
// tests can stand up a mocked server without touching globals.

import type {
  AdvanceResponse,
  CandidateDetail,
  CandidateList,
  DecisionResponse,
  IterateResponse,
  PcaDoc,
  ReviewDecision,
  RunState,
  SensitivityDoc,
} from './types.js';

export interface HttpResponse {
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
  text(): Promise<string>;
}

export type HttpFetch = (
  url: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<HttpResponse>;

export class ApiError extends Error {
  constructor(
    readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

async function raise(resp: HttpResponse): Promise<never> {
  let detail = '';
  try {
    const body = (await resp.json()) as { detail?: string };
    detail = body.detail ?? '';
  } catch {
    // non-JSON error body; the status code is enough
  }
  throw new ApiError(resp.status, detail || `request failed with ${resp.status}`);
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchFn: HttpFetch = (url, init) => fetch(url, init),
  ) {}

  private async get<T>(path: string): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path);
    if (!resp.ok) await raise(resp);
    return (await resp.json()) as T;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchFn(this.baseUrl + path, {
      method: 'POST',
      headers: { 'content-type': 'application/json' },
      body: JSON.stringify(body ?? {}),
    });
    if (!resp.ok) await raise(resp);
    return (await resp.json()) as T;
  }

  listRuns(): Promise<{
    runs: { run_id: string; status: string; last_stage: number; pending_decisions: number }[];
  }> {
    return this.get('/runs');
  }

  state(runId: string): Promise<RunState> {
    return this.get(`/runs/${runId}/state`);
  }

  candidates(runId: string, stage?: number): Promise<CandidateList> {
    const query = stage === undefined ? '' : `?stage=${stage}`;
    return this.get(`/runs/${runId}/candidates${query}`);
  }

  candidate(runId: string, cid: string): Promise<CandidateDetail> {
    return this.get(`/runs/${runId}/candidates/${cid}`);
  }

  decide(runId: string, decision: ReviewDecision): Promise<DecisionResponse> {
    return this.post(`/runs/${runId}/decisions`, decision);
  }

  advance(runId: string): Promise<AdvanceResponse> {
    return this.post(`/runs/${runId}/advance`, {});
  }

  iterate(runId: string, converge = false, actor?: string): Promise<IterateResponse> {
    return this.post(`/runs/${runId}/iterate`, { converge, actor });
  }

  pca(runId: string): Promise<PcaDoc> {
    return this.get(`/runs/${runId}/pca`);
  }

  sensitivity(runId: string): Promise<SensitivityDoc> {
    return this.get(`/runs/${runId}/sensitivity`);
  }
}
