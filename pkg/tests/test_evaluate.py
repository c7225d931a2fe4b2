"""Evaluators: analytic coefficient/Cp models and serialized-network inference."""

import json
import math

import numpy as np
import pytest

from setfoil import (
    CstParams,
    FlowConditions,
    analytic_cp,
    analytic_evaluate,
    gaussian_predict,
    load_model,
    make_cp_evaluator,
    make_evaluator,
    make_prob_evaluator,
    mlp_infer,
    operator_infer,
    save_model,
    synthetic_probabilistic,
)
from setfoil.errors import ConfigError, ModelError
from setfoil.evaluate import (
    CD0,
    K_INDUCED,
    CpCurve,
    MlpLayer,
    MlpModel,
    OperatorModel,
    camber_slope,
    camber_slope_safe,
)
from setfoil.geometry import surface_y

CAMBERED = CstParams(w_u=(0.12, 0.15, 0.18, 0.18, 0.2), w_l=(0.1, 0.06, 0.02, -0.04))


def camber_slope_fd(cst, x, h=1e-7):
    """Finite-difference oracle: slope of (upper + lower) / 2."""

    def yc(xq):
        up = surface_y(cst.w_u, xq, cst.y_te, 1.0)
        lo = surface_y(cst.lower_full, xq, cst.y_te, -1.0)
        return (up + lo) / 2.0

    return (yc(x + h) - yc(x - h)) / (2 * h)


def thin_airfoil_oracle(cst, flow):
    """Independent reimplementation with numpy's Gauss-Legendre nodes."""
    beta = math.sqrt(1.0 - flow.ma**2)
    alpha = math.radians(flow.aoa_deg)
    nodes, weights = np.polynomial.legendre.leggauss(2)
    theta = 0.5 * math.pi * (nodes + 1.0)  # map [-1,1] -> [0,pi]
    w = weights * 0.5 * math.pi
    x = 0.5 * (1.0 - np.cos(theta))
    slope = camber_slope(cst, x)
    delta = np.sum(w * slope * (np.cos(theta) - 1.0)) / math.pi
    a1 = 2.0 / math.pi * np.sum(w * slope * np.cos(theta))
    a2 = 2.0 / math.pi * np.sum(w * slope * np.cos(2.0 * theta))
    cl = 2.0 * math.pi / beta * (alpha + delta)
    cm = -math.pi / 4.0 * (a1 - a2) / beta
    cd = CD0 + K_INDUCED * cl**2
    return cd, cl, cm


def test_flat_plate_lift():
    flat = CstParams(w_u=(0.0,) * 5, w_l=(0.0,) * 4)
    pred = analytic_evaluate(flat, FlowConditions(ma=0.6, aoa_deg=2.5))
    # 2 pi alpha / beta with beta = 0.8
    expected = 2.0 * math.pi * math.radians(2.5) / 0.8
    assert pred.cl == pytest.approx(expected, abs=1e-12)
    assert pred.cm == pytest.approx(0.0, abs=1e-12)
    assert pred.cd == pytest.approx(CD0 + K_INDUCED * expected**2, abs=1e-12)


def test_symmetric_zero_alpha_is_liftless():
    sym = CstParams(w_u=(0.1, 0.2, 0.15, 0.1, 0.12), w_l=(0.2, 0.15, 0.1, 0.12))
    pred = analytic_evaluate(sym, FlowConditions(aoa_deg=0.0))
    assert pred.cl == pytest.approx(0.0, abs=1e-12)
    assert pred.cm == pytest.approx(0.0, abs=1e-12)


def test_camber_slope_matches_finite_differences():
    x = np.linspace(0.05, 0.95, 19)
    exact = camber_slope(CAMBERED, x)
    fd = camber_slope_fd(CAMBERED, x)
    assert np.max(np.abs(exact - fd)) < 1e-5


def test_analytic_evaluate_matches_independent_integration():
    rng = np.random.default_rng(17)
    for _ in range(40):
        vec = rng.uniform(0.04, 0.3, size=9)
        vec[8] = -abs(vec[8]) * 0.2
        cst = CstParams.from_vector(vec)
        flow = FlowConditions(ma=rng.uniform(0.2, 0.7), aoa_deg=rng.uniform(-3, 5))
        pred = analytic_evaluate(cst, flow)
        cd, cl, cm = thin_airfoil_oracle(cst, flow)
        assert pred.cl == pytest.approx(cl, abs=1e-10)
        assert pred.cm == pytest.approx(cm, abs=1e-10)
        assert pred.cd == pytest.approx(cd, abs=1e-10)


def test_supersonic_rejected():
    with pytest.raises(ValueError):
        analytic_evaluate(CAMBERED, FlowConditions(ma=1.0))
    with pytest.raises(ValueError):
        analytic_cp(CAMBERED, FlowConditions(ma=1.2))


def test_prediction_requires_finite_values():
    from setfoil import CoefficientPrediction

    with pytest.raises(ValueError):
        CoefficientPrediction(cd=float("nan"), cl=0.5, cm=-0.07)


def test_cp_curve_validation():
    with pytest.raises(ValueError):
        CpCurve(x=np.array([0.0, 0.5]), cp_upper=np.zeros(3), cp_lower=np.zeros(2))
    with pytest.raises(ValueError):
        CpCurve(x=np.array([0.5, 0.2]), cp_upper=np.zeros(2), cp_lower=np.zeros(2))
    with pytest.raises(ValueError):
        CpCurve(x=np.array([0.0, 1.5]), cp_upper=np.zeros(2), cp_lower=np.zeros(2))


def test_analytic_cp_shape_and_te_closure():
    curve = analytic_cp(CAMBERED, FlowConditions(), n_points=81)
    assert curve.x.size == 81
    assert curve.x[0] == 0.0 and curve.x[-1] == 1.0
    assert np.all(np.diff(curve.x) > 0)
    # loading envelope vanishes at the trailing edge, so the surfaces meet
    assert curve.cp_upper[-1] == pytest.approx(curve.cp_lower[-1], abs=1e-14)
    # lifting airfoil: suction side sits below the pressure side on average
    assert np.mean(curve.cp_upper) < np.mean(curve.cp_lower)
    with pytest.raises(ConfigError):
        analytic_cp(CAMBERED, FlowConditions(), n_points=11)


def test_camber_slope_safe_at_leading_edge():
    vals = camber_slope_safe(CAMBERED, np.array([0.0, 0.5]))
    assert np.all(np.isfinite(vals))
    assert vals[1] == pytest.approx(camber_slope(CAMBERED, 0.5), abs=1e-12)


def random_mlp(rng, input_size, sizes, head="point"):
    layers = []
    acts = ["leaky_relu", "softplus", "linear"]
    size = input_size
    for j, out in enumerate(sizes):
        layers.append(
            MlpLayer(
                weights=rng.normal(size=(out, size)),
                bias=rng.normal(size=out),
                activation=acts[j % 3] if j < len(sizes) - 1 else "linear",
            )
        )
        size = out
    return MlpModel(layers=tuple(layers), head=head, input_size=input_size)


def forward_oracle(model, x):
    """Scalar-loop forward pass, independent of the vectorized implementation."""
    v = list(np.asarray(x, dtype=float).ravel())
    spec = model.normalization.get("input")
    if spec:
        v = [(vi - lo) / (hi - lo) for vi, lo, hi in zip(v, spec["min"], spec["max"])]
    for layer in model.layers:
        nxt = []
        for row, b in zip(layer.weights, layer.bias):
            s = b
            for wij, vj in zip(row, v):
                s += wij * vj
            if layer.activation == "leaky_relu":
                s = s if s >= 0 else 0.2 * s
            elif layer.activation == "softplus":
                s = math.log1p(math.exp(-abs(s))) + max(s, 0.0)
            nxt.append(s)
        v = nxt
    return np.array(v)


def test_mlp_infer_matches_loop_oracle():
    rng = np.random.default_rng(99)
    for _ in range(60):
        n_in = int(rng.integers(2, 8))
        sizes = [int(rng.integers(1, 7)) for _ in range(int(rng.integers(1, 4)))]
        model = random_mlp(rng, n_in, sizes)
        x = rng.normal(size=n_in)
        got = mlp_infer(model, x)
        want = forward_oracle(model, x)
        assert np.max(np.abs(got - want)) < 1e-6


def test_leaky_relu_negative_slope():
    model = MlpModel(
        layers=(MlpLayer(weights=[[1.0]], bias=[0.0], activation="leaky_relu"),),
        input_size=1,
    )
    assert mlp_infer(model, [-1.0])[0] == pytest.approx(-0.2, abs=1e-15)
    assert mlp_infer(model, [2.0])[0] == pytest.approx(2.0, abs=1e-15)


def test_gaussian_head_std_positive():
    rng = np.random.default_rng(5)
    for _ in range(30):
        model = random_mlp(rng, 4, [5, 2], head="gaussian")
        out = mlp_infer(model, rng.normal(size=4))
        assert out.size == 2
        assert out[1] > 0.0


def test_gaussian_predict_draws():
    rng = np.random.default_rng(6)
    model = random_mlp(rng, 3, [4, 2], head="gaussian")
    x = [0.1, -0.4, 0.7]
    dist = gaussian_predict(model, x, m=64, seed=12)
    mean, std = mlp_infer(model, x)
    assert dist.mean == pytest.approx(float(mean))
    assert dist.std == pytest.approx(float(std))
    assert dist.samples.shape == (64,)
    again = gaussian_predict(model, x, m=64, seed=12)
    assert np.array_equal(dist.samples, again.samples)
    with pytest.raises(ValueError):
        gaussian_predict(model, x, m=1)
    point = random_mlp(rng, 3, [2])
    with pytest.raises(ModelError):
        gaussian_predict(point, x)


def test_mlp_normalization_round_trip():
    layer = MlpLayer(weights=np.eye(2), bias=np.zeros(2))
    model = MlpModel(
        layers=(layer,),
        input_size=2,
        normalization={
            "input": {"min": [0.0, 0.0], "max": [2.0, 4.0]},
            "output": {"min": [0.0, 0.0], "max": [2.0, 4.0]},
        },
    )
    # identity net + matching input/output spans reproduce the input
    out = mlp_infer(model, [1.0, 3.0])
    assert np.max(np.abs(out - [1.0, 3.0])) < 1e-12


def test_mlp_shape_validation():
    with pytest.raises(ModelError):
        MlpLayer(weights=[[1.0, 2.0]], bias=[0.0, 0.0])
    with pytest.raises(ModelError):
        MlpLayer(weights=[[1.0]], bias=[0.0], activation="tanh")
    good = MlpLayer(weights=[[1.0, 0.5]], bias=[0.0])
    with pytest.raises(ModelError):
        MlpModel(layers=(good,), input_size=3)
    with pytest.raises(ModelError):
        MlpModel(layers=(good,), input_size=2, head="gaussian")  # needs 2 outputs
    model = MlpModel(layers=(good,), input_size=2)
    with pytest.raises(ModelError):
        mlp_infer(model, [1.0, 2.0, 3.0])


def test_operator_infer_matches_dot_product_oracle():
    rng = np.random.default_rng(31)
    for _ in range(25):
        p = int(rng.integers(2, 6))
        branch = random_mlp(rng, 12, [6, p])
        trunk = random_mlp(rng, 2, [5, p])
        model = OperatorModel(branch=branch, trunk=trunk, p=p)
        x = rng.normal(size=12)
        stations = np.sort(rng.uniform(0, 1, size=5))
        coords = [(s, "upper") for s in stations] + [(s, "lower") for s in stations]
        curve = operator_infer(model, x, coords)
        b = forward_oracle(branch, x)
        for xi, cp_u, cp_l in zip(curve.x, curve.cp_upper, curve.cp_lower):
            assert cp_u == pytest.approx(float(b @ forward_oracle(trunk, [xi, 1.0])), abs=1e-6)
            assert cp_l == pytest.approx(float(b @ forward_oracle(trunk, [xi, -1.0])), abs=1e-6)


def test_operator_numeric_flags_and_pairing():
    rng = np.random.default_rng(32)
    branch = random_mlp(rng, 12, [4, 3])
    trunk = random_mlp(rng, 2, [4, 3])
    model = OperatorModel(branch=branch, trunk=trunk, p=3)
    x = rng.normal(size=12)
    by_name = operator_infer(model, x, [(0.2, "upper"), (0.2, "lower")])
    by_flag = operator_infer(model, x, [(0.2, 1.0), (0.2, -1.0)])
    assert by_name.cp_upper[0] == pytest.approx(by_flag.cp_upper[0])
    with pytest.raises(ModelError):
        operator_infer(model, x, [(0.2, "upper"), (0.4, "lower")])
    with pytest.raises(ModelError):
        operator_infer(model, x, [(0.2, "topside")])


def test_operator_model_validation():
    rng = np.random.default_rng(33)
    branch = random_mlp(rng, 12, [4, 3])
    trunk = random_mlp(rng, 2, [4, 3])
    with pytest.raises(ModelError):
        OperatorModel(branch=branch, trunk=trunk, p=4)
    bad_trunk = random_mlp(rng, 3, [4, 3])
    with pytest.raises(ModelError):
        OperatorModel(branch=branch, trunk=bad_trunk, p=3)


def test_model_file_round_trip(tmp_path):
    rng = np.random.default_rng(41)
    model = random_mlp(rng, 12, [8, 2], head="gaussian")
    path = tmp_path / "net.json"
    save_model(model, path)
    again = load_model(path)
    x = rng.normal(size=12)
    assert np.max(np.abs(mlp_infer(model, x) - mlp_infer(again, x))) < 1e-15

    op = OperatorModel(branch=random_mlp(rng, 12, [4, 3]), trunk=random_mlp(rng, 2, [4, 3]), p=3)
    op_path = tmp_path / "op.json"
    save_model(op, op_path)
    assert isinstance(load_model(op_path), OperatorModel)


def test_model_file_version_and_kind_checks(tmp_path):
    rng = np.random.default_rng(42)
    model = random_mlp(rng, 4, [2])
    path = tmp_path / "net.json"
    save_model(model, path)
    doc = json.loads(path.read_text())
    doc["version"] = 99
    path.write_text(json.dumps(doc))
    with pytest.raises(ModelError):
        load_model(path)
    doc["version"] = 1
    doc["kind"] = "transformer"
    path.write_text(json.dumps(doc))
    with pytest.raises(ModelError):
        load_model(path)


def test_synthetic_probabilistic_wraps_base():
    flow = FlowConditions()
    ev = synthetic_probabilistic(sigmas=(0.001, 0.02, 0.01))
    dist = ev(CAMBERED, flow)
    base = analytic_evaluate(CAMBERED, flow)
    assert dist.cl.mean == pytest.approx(base.cl)
    assert dist.cd.mean == pytest.approx(base.cd)
    assert dist.cm.mean == pytest.approx(base.cm)
    assert (dist.cd.std, dist.cl.std, dist.cm.std) == (0.001, 0.02, 0.01)
    mp = dist.mean_prediction()
    assert (mp.cd, mp.cl, mp.cm) == (base.cd, base.cl, base.cm)
    with pytest.raises(ConfigError):
        synthetic_probabilistic(sigmas=(0.1, -0.2, 0.1))
    with pytest.raises(ConfigError):
        synthetic_probabilistic(sigmas=(0.1, 0.2))


def test_scalar_distribution_draws_seeded():
    from setfoil import ScalarDistribution

    dist = ScalarDistribution(mean=0.75, std=0.024)
    d1 = dist.draw(100, seed=7)
    d2 = dist.draw(100, seed=7)
    assert np.array_equal(d1, d2)
    assert abs(np.mean(d1) - 0.75) < 0.01
    with pytest.raises(ValueError):
        ScalarDistribution(mean=0.0, std=-1.0)


def coefficient_mlp_file(tmp_path, rng):
    models = {k: random_mlp(rng, 12, [6, 2], head="gaussian") for k in ("cd", "cl", "cm")}
    doc = {"version": 1, "kind": "coefficient_mlp", "models": {k: m.to_dict() for k, m in models.items()}}
    path = tmp_path / "coeffs.json"
    path.write_text(json.dumps(doc))
    return path, models


def test_make_evaluator_strings(tmp_path):
    assert make_evaluator("analytic") is analytic_evaluate
    with pytest.raises(ConfigError):
        make_evaluator("psychic")
    with pytest.raises(ConfigError):
        make_prob_evaluator("synthetic(0.1,bad,0.2)")
    ev = make_prob_evaluator("synthetic(0.001,0.02,0.01)")
    assert ev(CAMBERED, FlowConditions()).cl.std == 0.02
    assert make_cp_evaluator("analytic") is analytic_cp

    rng = np.random.default_rng(50)
    path, models = coefficient_mlp_file(tmp_path, rng)
    point = make_evaluator(f"mlp:{path}")
    prob = make_prob_evaluator(f"mlp:{path}")
    flow = FlowConditions()
    pred = point(CAMBERED, flow)
    dist = prob(CAMBERED, flow)
    from setfoil.evaluate import _model_input

    x = _model_input(CAMBERED, flow)
    assert pred.cl == pytest.approx(float(mlp_infer(models["cl"], x)[0]))
    assert dist.cm.std == pytest.approx(float(mlp_infer(models["cm"], x)[1]))


def test_operator_cp_evaluator_string(tmp_path):
    rng = np.random.default_rng(51)
    op = OperatorModel(branch=random_mlp(rng, 12, [4, 3]), trunk=random_mlp(rng, 2, [4, 3]), p=3)
    path = tmp_path / "op.json"
    save_model(op, path)
    ev = make_cp_evaluator(f"operator:{path}")
    curve = ev(CAMBERED, FlowConditions(), 21)
    assert curve.x.size == 21
    # point mlp files are rejected as cp evaluators
    mlp_path = tmp_path / "net.json"
    save_model(random_mlp(rng, 12, [2]), mlp_path)
    with pytest.raises(ModelError):
        make_cp_evaluator(f"operator:{mlp_path}")
