// Canned payloads mirroring the run service schemas.  The decimals are
// deliberately awkward so rendering tests catch any reformatting: the screen
// must show exactly String(value) for every number here.

import type {
  CandidateDetail,
  CandidateSummary,
  PcaDoc,
  RunState,
  SensitivityDoc,
} from '../src/types.js';

export const RUN_ID = 'run-0001';

export const PARAM_NAMES = [
  'CST_U1', 'CST_U2', 'CST_U3', 'CST_U4', 'CST_U5',
  'CST_L2', 'CST_L3', 'CST_L4', 'CST_L5',
];

export function stateDoc(): RunState {
  return {
    run_id: RUN_ID,
    status: 'active',
    seed: 7,
    last_stage: 6,
    pending_decisions: 3,
    stages: [
      { stage: 1, kind: 'sample', members: 48, surviving: 48 },
      { stage: 2, kind: 'utility_filter', members: 48, surviving: 12 },
      { stage: 3, kind: 'sensitivity', members: 12, surviving: 12 },
      { stage: 4, kind: 'risk_filter', members: 30, surviving: 9 },
      { stage: 5, kind: 'refine_rank_cp', members: 9, surviving: 5 },
      { stage: 6, kind: 'review', members: 3, surviving: 3 },
    ],
    busy: false,
    busy_op: null,
    last_summary: { stage: 6, kind: 'review', out: 3 },
    last_error: null,
  };
}

export function freshStateDoc(): RunState {
  return {
    run_id: RUN_ID,
    status: 'active',
    seed: 7,
    last_stage: 0,
    pending_decisions: 0,
    stages: [],
    busy: false,
    busy_op: null,
    last_summary: null,
    last_error: null,
  };
}

export function candidateRows(): CandidateSummary[] {
  return [
    {
      id: 'ID-102',
      status: 'pending',
      in_bounds: true,
      parent: 'ID-23',
      cd: 0.0098712,
      cl: 0.6402911,
      cm: -0.0512306,
      u_comb: 0.4173359,
      tail_mean: 0.7048112,
      rating: 3,
    },
    {
      id: 'ID-103',
      status: 'pending',
      in_bounds: true,
      parent: null,
      cd: 0.0131507,
      cl: 0.8650284,
      cm: -0.1220954,
      u_comb: 0.3894561,
      tail_mean: 0.6911209,
      rating: 2,
    },
    {
      id: 'ID-101',
      status: 'pending',
      in_bounds: true,
      parent: 'ID-17',
      cd: 0.0112375,
      cl: 0.7218433,
      cm: -0.0731442,
      u_comb: 0.4521837,
      tail_mean: 0.7123456,
      rating: 4,
    },
  ];
}

export function detailDoc(): CandidateDetail {
  return {
    run_id: RUN_ID,
    id: 'ID-101',
    stage: 6,
    status: 'pending',
    in_bounds: true,
    flow: { ma: 0.6, aoa_deg: 2.5, re: 6300000.0 },
    cst: [0.1703, 0.2481, 0.2012, 0.1628, 0.1855, -0.1121, -0.0483, 0.0237, 0.0591],
    geometry: {
      upper: [
        [1.0, 0.0013],
        [0.75, 0.0397],
        [0.5, 0.0612],
        [0.25, 0.0654],
        [0.0, 0.0],
      ],
      lower: [
        [0.0, 0.0],
        [0.25, -0.0343],
        [0.5, -0.0301],
        [0.75, -0.0192],
        [1.0, -0.0013],
      ],
      loop: [
        [1.0, 0.0013],
        [0.75, 0.0397],
        [0.5, 0.0612],
        [0.25, 0.0654],
        [0.0, 0.0],
        [0.25, -0.0343],
        [0.5, -0.0301],
        [0.75, -0.0192],
        [1.0, -0.0013],
      ],
    },
    cp: {
      x: [0.0, 0.25, 0.5, 0.75, 1.0],
      cp_upper: [0.9213, -1.2046, -0.8137, -0.3052, 0.1108],
      cp_lower: [0.9213, 0.3121, 0.2087, 0.1013, 0.0542],
    },
    benchmark_cp: {
      x: [0.0, 0.25, 0.5, 0.75, 1.0],
      cp_upper: [0.9407, -0.9311, -0.6148, -0.2209, 0.1231],
      cp_lower: [0.9407, 0.2548, 0.1842, 0.0911, 0.0463],
    },
    coefficients: { cd: 0.0112375, cl: 0.7218433, cm: -0.0731442 },
    utility: { u_cl: 0.5630143, u_cd: 0.4815772, u_cm: 0.7561861, u_comb: 0.4521837 },
    risk: {
      tail_mean: 0.7123456,
      var_quantile: 0.7319802,
      k: 60,
      pass: true,
      mean: 0.7218433,
      std: 0.024,
      seed: 734912573,
    },
    rating: {
      rating: 4,
      peak_prominence: 0.1159112,
      notes: ['milder peak suction than benchmark'],
    },
    assessment:
      'CD = 0.0112, CL = 0.7218, CM = -0.0731. Combined utility 0.4522 against the benchmark 0.3966. Verdict: pending.',
    human_verdict: null,
    lineage: { parent: 'ID-17', directive: '+CST4', stage: 4 },
    pca: [0.1372402, 0.0724738],
  };
}

export function pcaDoc(): PcaDoc {
  return {
    run_id: RUN_ID,
    stages: {
      '5': {
        'ID-17': [-0.2214831, 0.0341209],
        'ID-23': [-0.1530024, -0.1182356],
      },
      '6': {
        'ID-101': [0.1372402, 0.0724738],
        'ID-102': [0.0518343, -0.0493821],
        'ID-103': [0.2241087, 0.1142296],
      },
    },
    explained_variance: [0.6231904, 0.2108457],
  };
}

export function sensitivityDoc(): SensitivityDoc {
  return {
    run_id: RUN_ID,
    names: [...PARAM_NAMES],
    metrics: {
      CL: { ranking: [...PARAM_NAMES], sign: [1, 1, 1, 1, 1, -1, -1, -1, -1] },
      CD: { ranking: [...PARAM_NAMES], sign: [1, 1, 1, 1, 1, 1, 1, 1, 1] },
      CM: { ranking: [...PARAM_NAMES], sign: [-1, -1, -1, -1, -1, 1, 1, 1, 1] },
    },
    heuristics: ['increase CST_U2 to raise CL'],
    base_n: 16,
    total_rows: 320,
  };
}
