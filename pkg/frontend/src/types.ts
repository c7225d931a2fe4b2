// Payload shapes mirroring the run service's JSON schemas.  The client never
// recomputes any of these numbers; it only arranges them on screen.

export interface StageSummary {
  stage: number;
  kind: string;
  members: number;
  surviving: number;
}

export interface RunState {
  run_id: string;
  status: string;
  seed: number;
  last_stage: number;
  pending_decisions: number;
  stages: StageSummary[];
  busy: boolean;
  busy_op: string | null;
  last_summary: Record<string, unknown> | null;
  last_error: string | null;
}

export interface CandidateSummary {
  id: string;
  status: string;
  in_bounds: boolean;
  parent: string | null;
  cd: number | null;
  cl: number | null;
  cm: number | null;
  u_comb: number | null;
  tail_mean: number | null;
  rating: number | null;
}

export interface CandidateList {
  run_id: string;
  stage: number;
  candidates: CandidateSummary[];
}

export interface CpCurve {
  x: number[];
  cp_upper: number[];
  cp_lower: number[];
}

export interface CandidateDetail {
  run_id: string;
  id: string;
  stage: number;
  status: string;
  in_bounds: boolean;
  flow: { ma: number; aoa_deg: number; re: number };
  cst: number[];
  geometry: { upper: number[][]; lower: number[][]; loop: number[][] };
  cp: CpCurve;
  benchmark_cp: CpCurve;
  coefficients: { cd: number; cl: number; cm: number } | null;
  utility: { u_cl: number; u_cd: number; u_cm: number; u_comb: number } | null;
  risk: {
    tail_mean: number;
    var_quantile: number;
    k: number;
    pass: boolean;
    mean: number;
    std: number;
    seed: number;
  } | null;
  rating: { rating: number; peak_prominence?: number; notes?: string[] } | null;
  assessment: string | null;
  human_verdict: { verdict: string; actor: string; note: string } | null;
  lineage: { parent?: string; directive?: string; stage?: number } | null;
  pca: [number, number] | null;
}

export interface Directive {
  param: string;
  direction: 'increase' | 'decrease';
  magnitude: number | null;
}

export interface ReviewDecision {
  candidate_id: string;
  verdict: 'valid' | 'invalid';
  note?: string;
  directives?: Directive[];
  actor?: string;
}

export interface DecisionResponse {
  run_id: string;
  candidate_id: string;
  verdict: string;
  note: string;
  directives: { param: string; direction: number; magnitude: number | null }[];
  actor: string;
}

export interface AdvanceResponse {
  run_id: string;
  state: 'running' | 'done';
  stage: number;
  summary: Record<string, unknown> | null;
}

export interface IterateResponse {
  run_id: string;
  status: string;
  stage: number;
  changed: boolean;
  valid?: string[];
  invalid?: string[];
}

export interface PcaDoc {
  run_id?: string;
  stages: Record<string, Record<string, [number, number]>>;
  explained_variance: number[];
  components?: number[][];
  mean?: number[];
}

export interface SensitivityDoc {
  run_id?: string;
  names: string[];
  metrics: Record<
    string,
    { ranking: string[]; sign: number[]; rho?: number[]; s_first?: number[]; s_total?: number[] }
  >;
  heuristics: string[];
  base_n?: number;
  total_rows?: number;
}

// Everything the detail panel shows for one design, in payload units.
export interface CandidateView {
  id: string;
  stage: number;
  status: string;
  outline: number[][];
  cp: CpCurve;
  benchmarkCp: CpCurve;
  coefficients: { cd: number; cl: number; cm: number } | null;
  utility: { u_cl: number; u_cd: number; u_cm: number; u_comb: number } | null;
  risk: CandidateDetail['risk'];
  rating: number | null;
  assessment: string | null;
  humanVerdict: CandidateDetail['human_verdict'];
  pca: [number, number] | null;
}
