"""
Evaluating designs
==================

Evaluation is pluggable.  The built-in analytic evaluator maps camber to
lift, moment, and a drag polar in closed form; the synthetic probabilistic
wrapper adds fixed per-coefficient spreads; and serialized feed-forward nets
(plain or branch/trunk operator) drop in through the same factory strings.
"""

import tempfile
from pathlib import Path

import numpy as np

from setfoil import (
    CstParams,
    FlowConditions,
    MlpLayer,
    MlpModel,
    OperatorModel,
    analytic_cp,
    analytic_evaluate,
    gaussian_predict,
    load_model,
    mlp_infer,
    operator_infer,
    save_model,
    synthetic_probabilistic,
)

out = Path(tempfile.mkdtemp(prefix="setfoil_eval_"))
flow = FlowConditions(ma=0.4, aoa_deg=2.0, re=1e6)
cambered = CstParams(w_u=(0.20, 0.28, 0.24, 0.20, 0.16), w_l=(-0.08, -0.02, 0.04, 0.06), y_te=0.0)

# -- closed-form coefficients ----------------------------------------------------
pred = analytic_evaluate(cambered, flow)
print(f"analytic: CL={pred.cl:.4f} CD={pred.cd:.4f} CM={pred.cm:.4f}")
flat = CstParams(w_u=(0, 0, 0, 0, 0), w_l=(0, 0, 0, 0), y_te=0.0)
print(f"flat plate at 2 deg: CL={analytic_evaluate(flat, flow).cl:.4f}",
      f"(thin-airfoil 2*pi*alpha/beta = {2*np.pi*np.deg2rad(2)/np.sqrt(1-0.4**2):.4f})")

curve = analytic_cp(cambered, flow, n_points=81)
print(f"Cp curve: peak suction {-curve.cp_upper.min():.3f} at "
      f"x/c={curve.x[np.argmin(curve.cp_upper)]:.3f}; closes at TE "
      f"(cp_u[-1]={curve.cp_upper[-1]:.3f})")

# -- probabilistic wrapper --------------------------------------------------------
prob = synthetic_probabilistic()
dist = prob(cambered, flow)
draws = dist.cl.draw(1000, seed=4)
print(f"synthetic spread: CL ~ N({dist.cl.mean:.4f}, {dist.cl.std}),",
      f"1000-draw mean {draws.mean():.4f}")

# -- serialized nets ---------------------------------------------------------------
# A hand-sized gaussian-head net: 12 inputs (9 weights + ma, aoa, re), two
# outputs (mean, raw spread through softplus).
rng = np.random.default_rng(0)
net = MlpModel(
    layers=(
        MlpLayer(weights=rng.normal(0, 0.3, (6, 12)), bias=np.zeros(6), activation="leaky_relu"),
        MlpLayer(weights=rng.normal(0, 0.3, (2, 6)), bias=[0.5, -1.0]),
    ),
    head="gaussian",
    input_size=12,
)
path = out / "cl_net.json"
save_model(net, path)
loaded = load_model(path)
x = np.concatenate([cambered.as_vector(), [flow.ma, flow.aoa_deg, flow.re / 1e6]])
mean, std = mlp_infer(loaded, x)
print(f"gaussian net from {path.name}: mean={mean:.4f} std={std:.4f} (std always > 0)")
print("predictive distribution:", gaussian_predict(loaded, x, m=8, seed=1).draw(3, 1))

# Operator net: branch encodes the design, trunk encodes a surface query
# (x/c, +1 upper / -1 lower); Cp is their latent dot product.
op = OperatorModel(
    branch=MlpModel(
        layers=(MlpLayer(weights=rng.normal(0, 0.2, (3, 12)), bias=np.zeros(3), activation="leaky_relu"),),
        input_size=12,
    ),
    trunk=MlpModel(
        layers=(MlpLayer(weights=rng.normal(0, 0.2, (3, 2)), bias=np.zeros(3), activation="leaky_relu"),),
        input_size=2,
    ),
    p=3,
)
stations = [0.1, 0.4, 0.8]
queried = operator_infer(op, x, [(s, "upper") for s in stations] + [(s, "lower") for s in stations])
print("operator Cp at x/c", stations, "->", np.round(queried.cp_upper, 3))
