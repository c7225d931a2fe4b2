"""
Utility scoring and set pruning
===============================

Each design collapses to one number: U = 0.5 U(CL) + 0.3 U(CD) + 0.2 U(CM).
Lift rewards exceeding 0.5, drag decays exponentially, pitching moment scales
linearly to zero at -0.3.  Filtering keeps everything at or above a floor;
ranking cuts to a fixed size with ties broken by id so reruns agree.
"""

import numpy as np

from setfoil import (
    DesignSpace,
    FlowConditions,
    analytic_evaluate,
    rank_by_utility,
    sample,
    score_candidate,
    utility_cd,
    utility_cl,
    utility_cm,
    utility_combined,
    utility_filter,
)
from setfoil.evaluate import CoefficientPrediction

# -- the three curves -------------------------------------------------------------
print("U(CL):", [f"{cl:.2f}->{utility_cl(cl):+.3f}" for cl in (0.3, 0.5, 0.522, 0.9, 1.4)])
print("U(CD):", [f"{cd:.3f}->{utility_cd(cd):.3f}" for cd in (0.006, 0.010, 0.013, 0.05)])
print("U(CM):", [f"{cm:+.3f}->{utility_cm(cm):.3f}" for cm in (0.0, -0.073, -0.285, -0.362)])

benchmark = CoefficientPrediction(cd=0.010, cl=0.522, cm=-0.073)
score = utility_combined(benchmark)
print(f"reference section utility: {score.u_comb:.4f} "
      f"(u_cl={score.u_cl:.4f}, u_cd={score.u_cd:.4f}, u_cm={score.u_cm:.4f})")

# -- pruning a sampled set ----------------------------------------------------------
space = DesignSpace()
flow = FlowConditions(ma=0.4, aoa_deg=2.0, re=1e6)
dset = sample(space, 200, "lhs", flow, seed=42)
for c in dset.members:
    c.evaluations["coefficients"] = analytic_evaluate(c.cst, c.flow).as_dict()
    score_candidate(c)  # persists the utility breakdown on the candidate

scores = np.array([c.evaluations["utility"]["u_comb"] for c in dset.members])
print(f"sampled 200: u_comb range [{scores.min():.3f}, {scores.max():.3f}], "
      f"median {np.median(scores):.3f}")

survivors = utility_filter(dset, threshold=0.40, top_k=20)
print(f"threshold 0.40 + top 20 -> {len(survivors)} kept; "
      f"floor of kept = {min(c.evaluations['utility']['u_comb'] for c in survivors.members):.3f}")
print("provenance:", survivors.provenance)

ranked = rank_by_utility(survivors)
print("best three:", [(c.id, round(c.evaluations["utility"]["u_comb"], 4)) for c in ranked[:3]])
