"""
Sampling the design space
=========================

The search box is nine per-parameter intervals.  Three generators fill it:
Latin hypercube (stratified), Sobol (low discrepancy), and plain random
(splittable per candidate).  The point of the fancier generators is coverage,
which the little histogram below makes visible.
"""

import json

import numpy as np

from setfoil import DesignSpace, FlowConditions, export_batch, import_batch, sample

space = DesignSpace()
flow = FlowConditions(ma=0.4, aoa_deg=2.0, re=1e6)

print("design space:")
for name, lo, hi in zip(space.display_names, space.lower(), space.upper()):
    print(f"  {name:8s} [{lo:+.2f}, {hi:+.2f}]")

# -- three strategies ---------------------------------------------------------
for strategy in ("lhs", "sobol", "random"):
    dset = sample(space, 8, strategy, flow, seed=7)
    first = dset.members[0]
    print(f"{strategy:6s} first candidate {first.id}: {np.round(first.cst.as_vector(), 3)}")

# LHS puts exactly one sample in each of n equal slices of every axis.
n = 16
dset = sample(space, n, "lhs", flow, seed=3)
unit = (dset.matrix() - space.lower()) / (space.upper() - space.lower())
occupancy = np.histogram(unit[:, 0], bins=n, range=(0, 1))[0]
print("LHS axis-0 slice occupancy (all 1):", occupancy)

# Sobol coverage vs random, measured as worst deviation from the ideal count
# on a coarse 2-D grid.
def worst_bin_deviation(u):
    worst = 0.0
    for i in range(9):
        for j in range(i + 1, 9):
            counts, _, _ = np.histogram2d(u[:, i], u[:, j], bins=4, range=[[0, 1], [0, 1]])
            worst = max(worst, float(np.max(np.abs(counts - u.shape[0] / 16))))
    return worst

u_sob = (sample(space, 256, "sobol", flow, seed=0).matrix() - space.lower()) / (space.upper() - space.lower())
u_rnd = (sample(space, 256, "random", flow, seed=0).matrix() - space.lower()) / (space.upper() - space.lower())
print(f"worst 4x4 bin deviation at n=256: sobol {worst_bin_deviation(u_sob):.1f}, "
      f"random {worst_bin_deviation(u_rnd):.1f}")

# -- batch round trip -----------------------------------------------------------
doc = export_batch(dset)
print("batch export keys:", sorted(doc), "| row width:", len(doc["samples"][0]),
      "(9 shape + ma, aoa, re)")
again = import_batch(json.loads(json.dumps(doc)), space)
print("round-trip ids preserved:", again.ids() == dset.ids())
