"""Pluggable candidate evaluation.

Three interchangeable evaluator families live here:

* an analytic thin-airfoil reference model (deterministic coefficients and a
  chordwise pressure proxy) used as the desk-scale stand-in for trained
  surrogates,
* a synthetic-noise wrapper that turns any deterministic evaluator into a
  probabilistic one with fixed per-coefficient sigmas, and
* weight-file inference for feed-forward nets (point or Gaussian heads) and
  branch/trunk operator models read from versioned JSON documents.

All evaluators are pure: the same inputs and seed give identical outputs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from math import comb, pi, sqrt

import numpy as np

from .errors import ConfigError, ModelError
from .geometry import CstParams, FlowConditions, class_function, surface_y

WEIGHT_FILE_VERSION = 1
ACTIVATIONS = ("linear", "leaky_relu", "softplus")
LEAKY_SLOPE = 0.2

# Stand-in physics constants for the analytic drag model; these put typical
# drag near the 0.010 scale of the target application, nothing more.
CD0 = 0.006
K_INDUCED = 0.01

# Default per-coefficient predictive sigmas for the synthetic wrapper.
DEFAULT_SIGMAS = (0.0011, 0.024, 0.012)  # cd, cl, cm


@dataclass(frozen=True)
class CoefficientPrediction:
    """Point prediction of drag, lift, and quarter-chord moment coefficients."""

    cd: float
    cl: float
    cm: float

    def __post_init__(self):
        if not all(np.isfinite([self.cd, self.cl, self.cm])):
            raise ValueError("non-finite coefficient prediction")

    def as_dict(self) -> dict:
        return {"cd": self.cd, "cl": self.cl, "cm": self.cm}


@dataclass(frozen=True)
class ScalarDistribution:
    """Gaussian predictive distribution for one coefficient."""

    mean: float
    std: float
    samples: np.ndarray | None = None  # optional cached draws

    def __post_init__(self):
        if self.std < 0:
            raise ValueError("std must be non-negative")

    def draw(self, m: int, seed) -> np.ndarray:
        """m independent draws; identical (m, seed) gives identical values."""
        rng = np.random.default_rng(seed)
        return self.mean + self.std * rng.standard_normal(m)


@dataclass(frozen=True)
class PredictionDistribution:
    """Per-coefficient predictive distributions for one candidate."""

    cd: ScalarDistribution
    cl: ScalarDistribution
    cm: ScalarDistribution

    def mean_prediction(self) -> CoefficientPrediction:
        return CoefficientPrediction(cd=self.cd.mean, cl=self.cl.mean, cm=self.cm.mean)

    def as_dict(self) -> dict:
        return {
            "cd": {"mean": self.cd.mean, "std": self.cd.std},
            "cl": {"mean": self.cl.mean, "std": self.cl.std},
            "cm": {"mean": self.cm.mean, "std": self.cm.std},
        }


# ---------------------------------------------------------------------------
# Analytic reference model


def _bernstein_sum(weights, x):
    weights = np.asarray(weights, dtype=float)
    n = weights.size - 1
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for i, w in enumerate(weights):
        out = out + w * comb(n, i) * x**i * (1.0 - x) ** (n - i)
    return out


def camber_slope(cst: CstParams, x):
    """d(y_camber)/dx at chord fraction x.

    The camber line is (y_u + y_l)/2 = C(x) * (S_u(x) - S_l(x)) / 2; the
    trailing-edge offsets cancel.  The Bernstein difference is differentiated
    exactly via the degree-reduction identity.
    """
    x = np.asarray(x, dtype=float)
    dw = 0.5 * (np.array(cst.w_u) - np.array(cst.lower_full))
    n = dw.size - 1
    ddw = n * np.diff(dw)  # S'(x) weights on the degree n-1 basis
    c = class_function(x)
    dc = 0.5 * x**-0.5 * (1.0 - x) - x**0.5
    s = _bernstein_sum(dw, x)
    ds = _bernstein_sum(ddw, x)
    out = dc * s + c * ds
    return float(out) if out.ndim == 0 else out


def _check_subsonic(flow: FlowConditions) -> float:
    if flow.ma >= 1.0:
        raise ValueError(f"Mach {flow.ma} outside the subsonic model domain")
    return sqrt(1.0 - flow.ma * flow.ma)


# 2-point Gauss-Legendre nodes/weight on theta in [0, pi].
_GL_THETA = pi * (np.array([-1.0, 1.0]) / sqrt(3.0) + 1.0) / 2.0
_GL_WEIGHT = pi / 2.0


def analytic_evaluate(cst: CstParams, flow: FlowConditions) -> CoefficientPrediction:
    """Thin-airfoil coefficient model with Prandtl-Glauert compressibility.

    Lift and quarter-chord moment come from a two-point quadrature of the
    camber slope against the classical Fourier kernels; drag is the stand-in
    polar cd0 + K * C_L^2.  Deterministic and smooth in every input.
    """
    beta = _check_subsonic(flow)
    alpha = np.deg2rad(flow.aoa_deg)
    theta = _GL_THETA
    xq = (1.0 - np.cos(theta)) / 2.0
    slope = camber_slope(cst, xq)
    delta = (1.0 / pi) * _GL_WEIGHT * np.sum(slope * (np.cos(theta) - 1.0))
    a1 = (2.0 / pi) * _GL_WEIGHT * np.sum(slope * np.cos(theta))
    a2 = (2.0 / pi) * _GL_WEIGHT * np.sum(slope * np.cos(2.0 * theta))
    cl = (2.0 * pi / beta) * (alpha + delta)
    cm = -(pi / 4.0) * (a1 - a2) / beta
    cd = CD0 + K_INDUCED * cl * cl
    return CoefficientPrediction(cd=float(cd), cl=float(cl), cm=float(cm))


@dataclass(frozen=True)
class CpCurve:
    """Chordwise pressure-coefficient samples on both surfaces."""

    x: np.ndarray
    cp_upper: np.ndarray
    cp_lower: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "cp_upper", np.asarray(self.cp_upper, dtype=float))
        object.__setattr__(self, "cp_lower", np.asarray(self.cp_lower, dtype=float))
        if x.size != self.cp_upper.size or x.size != self.cp_lower.size:
            raise ValueError("mismatched Cp array lengths")
        if np.any(x < 0.0) or np.any(x > 1.0):
            raise ValueError("x/c outside [0, 1]")
        if np.any(np.diff(x) <= 0.0):
            raise ValueError("x/c must be strictly increasing")

    def points(self) -> list[tuple[float, str, float]]:
        """Ordered (x/c, surface, Cp) triples, upper surface first."""
        out = [(float(x), "upper", float(c)) for x, c in zip(self.x, self.cp_upper)]
        out += [(float(x), "lower", float(c)) for x, c in zip(self.x, self.cp_lower)]
        return out

    def to_dict(self) -> dict:
        return {
            "x": self.x.tolist(),
            "cp_upper": self.cp_upper.tolist(),
            "cp_lower": self.cp_lower.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CpCurve":
        return cls(x=d["x"], cp_upper=d["cp_upper"], cp_lower=d["cp_lower"])


def analytic_cp(cst: CstParams, flow: FlowConditions, n_points: int = 81) -> CpCurve:
    """Thin-airfoil pressure proxy with Prandtl-Glauert scaling.

    Both surfaces share a thickness suction term; they differ by a loading
    term proportional to incidence plus local camber slope, shaped by a
    leading-edge-weighted envelope that vanishes at the trailing edge, so
    Cp_upper(1) = Cp_lower(1) by construction.
    """
    if n_points < 21:
        raise ConfigError("n_points must be at least 21")
    beta = _check_subsonic(flow)
    alpha = np.deg2rad(flow.aoa_deg)
    theta = np.linspace(0.0, pi, n_points)
    x = 0.5 * (1.0 - np.cos(theta))
    yu = surface_y(cst.w_u, x, cst.y_te, sign=+1.0)
    yl = surface_y(cst.lower_full, x, cst.y_te, sign=-1.0)
    thickness = yu - yl
    base = -(2.0 / beta) * thickness
    envelope = np.sqrt((1.0 - x) / (x + 0.01))
    loading = (4.0 / beta) * (alpha + camber_slope_safe(cst, x)) * envelope
    return CpCurve(x=x, cp_upper=base - 0.5 * loading, cp_lower=base + 0.5 * loading)


def camber_slope_safe(cst: CstParams, x):
    """camber_slope with the x=0 singularity of C'(x) replaced by a one-sided value."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    interior = x > 0.0
    out[interior] = camber_slope(cst, x[interior])
    if np.any(~interior):
        out[~interior] = camber_slope(cst, 1e-6)
    return out


# ---------------------------------------------------------------------------
# Weight-file inference


def _apply_activation(name: str, v: np.ndarray) -> np.ndarray:
    if name == "linear":
        return v
    if name == "leaky_relu":
        return np.where(v >= 0.0, v, LEAKY_SLOPE * v)
    if name == "softplus":
        return np.logaddexp(0.0, v)
    raise ModelError(f"unknown activation {name!r}")


@dataclass(frozen=True)
class MlpLayer:
    weights: np.ndarray  # (out, in)
    bias: np.ndarray  # (out,)
    activation: str = "linear"

    def __post_init__(self):
        w = np.atleast_2d(np.asarray(self.weights, dtype=float))
        b = np.asarray(self.bias, dtype=float).ravel()
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", b)
        if w.shape[0] != b.size:
            raise ModelError(f"bias length {b.size} != rows {w.shape[0]}")
        if self.activation not in ACTIVATIONS:
            raise ModelError(f"unknown activation {self.activation!r}")


@dataclass(frozen=True)
class MlpModel:
    """Feed-forward net with optional Gaussian head and min-max normalization."""

    layers: tuple
    head: str = "point"
    input_size: int = 12
    normalization: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(self.layers))
        if not self.layers:
            raise ModelError("model needs at least one layer")
        if self.head not in ("point", "gaussian"):
            raise ModelError(f"unknown head {self.head!r}")
        size = self.input_size
        for j, layer in enumerate(self.layers):
            if layer.weights.shape[1] != size:
                raise ModelError(
                    f"layer {j} expects {layer.weights.shape[1]} inputs, got {size}"
                )
            size = layer.weights.shape[0]
        if self.head == "gaussian" and size != 2:
            raise ModelError("gaussian head requires exactly 2 final outputs")

    @property
    def output_size(self) -> int:
        return self.layers[-1].weights.shape[0]

    def to_dict(self) -> dict:
        return {
            "input_size": self.input_size,
            "head": self.head,
            "layers": [
                {
                    "weights": l.weights.tolist(),
                    "bias": l.bias.tolist(),
                    "activation": l.activation,
                }
                for l in self.layers
            ],
            "normalization": self.normalization,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MlpModel":
        try:
            layers = tuple(
                MlpLayer(
                    weights=l["weights"],
                    bias=l["bias"],
                    activation=l.get("activation", "linear"),
                )
                for l in d["layers"]
            )
            return cls(
                layers=layers,
                head=d.get("head", "point"),
                input_size=int(d.get("input_size", 12)),
                normalization=d.get("normalization", {}),
            )
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed model document: {exc}") from exc


def _normalize(v: np.ndarray, spec: dict | None) -> np.ndarray:
    if not spec:
        return v
    lo = np.asarray(spec["min"], dtype=float)
    hi = np.asarray(spec["max"], dtype=float)
    return (v - lo) / (hi - lo)


def _denormalize(v: np.ndarray, spec: dict | None) -> np.ndarray:
    if not spec:
        return v
    lo = np.asarray(spec["min"], dtype=float)
    hi = np.asarray(spec["max"], dtype=float)
    return v * (hi - lo) + lo


def mlp_infer(model: MlpModel, x) -> np.ndarray:
    """Exact forward pass. A gaussian head returns (mean, softplus(raw_std))."""
    v = np.asarray(x, dtype=float).ravel()
    if v.size != model.input_size:
        raise ModelError(f"expected {model.input_size} inputs, got {v.size}")
    v = _normalize(v, model.normalization.get("input"))
    for layer in model.layers:
        v = _apply_activation(layer.activation, layer.weights @ v + layer.bias)
    if model.head == "gaussian":
        mean = _denormalize(np.array([v[0]]), model.normalization.get("output"))[0]
        scale = 1.0
        out_norm = model.normalization.get("output")
        if out_norm:
            scale = float(out_norm["max"]) - float(out_norm["min"])
        std = float(np.logaddexp(0.0, v[1])) * scale
        return np.array([mean, std])
    return _denormalize(v, model.normalization.get("output"))


def gaussian_predict(model: MlpModel, x, m: int = 200, seed=0) -> ScalarDistribution:
    """Predictive Gaussian from a gaussian-head net, with m cached seeded draws."""
    if model.head != "gaussian":
        raise ModelError("gaussian_predict requires a gaussian-head model")
    if m < 2:
        raise ValueError("m must be at least 2")
    mean, std = mlp_infer(model, x)
    dist = ScalarDistribution(mean=float(mean), std=float(std))
    return ScalarDistribution(mean=dist.mean, std=dist.std, samples=dist.draw(m, seed))


@dataclass(frozen=True)
class OperatorModel:
    """Branch/trunk operator net: Cp(coord) = dot(branch(inputs), trunk(coord))."""

    branch: MlpModel
    trunk: MlpModel
    p: int
    normalization: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.branch.output_size != self.p or self.trunk.output_size != self.p:
            raise ModelError(
                f"branch/trunk outputs ({self.branch.output_size}, "
                f"{self.trunk.output_size}) must equal latent size {self.p}"
            )
        if self.trunk.input_size != 2:
            raise ModelError("trunk must take 2 coordinate inputs")

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "branch": self.branch.to_dict(),
            "trunk": self.trunk.to_dict(),
            "normalization": self.normalization,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "OperatorModel":
        try:
            return cls(
                branch=MlpModel.from_dict(d["branch"]),
                trunk=MlpModel.from_dict(d["trunk"]),
                p=int(d["p"]),
                normalization=d.get("normalization", {}),
            )
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed operator document: {exc}") from exc


SURFACE_FLAGS = {"upper": 1.0, "lower": -1.0}


def operator_infer(model: OperatorModel, x, coords) -> CpCurve:
    """Evaluate the operator net at each (x/c, surface) query point.

    ``coords`` entries are (x, "upper"|"lower") pairs or plain (x, y) numbers
    (the sign of y selects the surface label).  De-normalization follows the
    model's metadata.
    """
    latent = None
    xs, flags, cps = [], [], []
    for x_c, second in coords:
        if isinstance(second, str):
            if second not in SURFACE_FLAGS:
                raise ModelError(f"unknown surface flag {second!r}")
            flag = SURFACE_FLAGS[second]
            label = second
        else:
            flag = float(second)
            label = "upper" if flag >= 0.0 else "lower"
        if latent is None:
            latent = mlp_infer(model.branch, x)
        t = mlp_infer(model.trunk, [x_c, flag])
        cp = float(latent @ t)
        cp = float(_denormalize(np.array([cp]), model.normalization.get("output"))[0])
        xs.append(float(x_c))
        flags.append(label)
        cps.append(cp)
    xu = [x for x, f in zip(xs, flags) if f == "upper"]
    cu = [c for c, f in zip(cps, flags) if f == "upper"]
    xl = [x for x, f in zip(xs, flags) if f == "lower"]
    cl = [c for c, f in zip(cps, flags) if f == "lower"]
    if xu != xl:
        # Uneven queries: fall back to a merged grid per surface.
        raise ModelError("operator queries must pair upper and lower stations")
    return CpCurve(x=np.array(xu), cp_upper=np.array(cu), cp_lower=np.array(cl))


def load_model(path) -> MlpModel | OperatorModel:
    """Read a versioned JSON weight file into an MlpModel or OperatorModel."""
    with open(path) as fh:
        doc = json.load(fh)
    version = doc.get("version")
    if version != WEIGHT_FILE_VERSION:
        raise ModelError(f"unsupported weight-file version {version!r}")
    kind = doc.get("kind")
    if kind == "mlp":
        return MlpModel.from_dict(doc)
    if kind == "operator":
        return OperatorModel.from_dict(doc)
    raise ModelError(f"unknown model kind {kind!r}")


def save_model(model: MlpModel | OperatorModel, path) -> None:
    doc = model.to_dict()
    doc["version"] = WEIGHT_FILE_VERSION
    doc["kind"] = "operator" if isinstance(model, OperatorModel) else "mlp"
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=1)


# ---------------------------------------------------------------------------
# Evaluator factories


def synthetic_probabilistic(base=None, sigmas=DEFAULT_SIGMAS):
    """Wrap a deterministic evaluator into one returning PredictionDistribution.

    The mean of each coefficient equals the base prediction exactly; the stds
    are the configured sigmas.
    """
    base = base or analytic_evaluate
    sigmas = tuple(float(s) for s in sigmas)
    if len(sigmas) != 3:
        raise ConfigError("expected three sigmas (cd, cl, cm)")
    if any(s < 0 for s in sigmas):
        raise ConfigError("sigmas must be non-negative")

    def evaluator(cst: CstParams, flow: FlowConditions) -> PredictionDistribution:
        pred = base(cst, flow)
        return PredictionDistribution(
            cd=ScalarDistribution(pred.cd, sigmas[0]),
            cl=ScalarDistribution(pred.cl, sigmas[1]),
            cm=ScalarDistribution(pred.cm, sigmas[2]),
        )

    return evaluator


def _model_input(cst: CstParams, flow: FlowConditions) -> np.ndarray:
    return np.concatenate([[flow.ma, flow.aoa_deg, flow.re], cst.as_vector()])


def _mlp_coefficient_evaluator(path, probabilistic: bool):
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("version") != WEIGHT_FILE_VERSION:
        raise ModelError(f"unsupported weight-file version {doc.get('version')!r}")
    if doc.get("kind") != "coefficient_mlp":
        raise ModelError('evaluator weight file must have kind "coefficient_mlp"')
    models = {k: MlpModel.from_dict(doc["models"][k]) for k in ("cd", "cl", "cm")}
    heads = {k: m.head for k, m in models.items()}
    if probabilistic and any(h != "gaussian" for h in heads.values()):
        raise ModelError("probabilistic evaluator needs gaussian heads")

    def point_eval(cst, flow):
        x = _model_input(cst, flow)
        vals = {}
        for k, m in models.items():
            out = mlp_infer(m, x)
            vals[k] = float(out[0])
        return CoefficientPrediction(**vals)

    def prob_eval(cst, flow):
        x = _model_input(cst, flow)
        parts = {}
        for k, m in models.items():
            mean, std = mlp_infer(m, x)
            parts[k] = ScalarDistribution(float(mean), float(std))
        return PredictionDistribution(**parts)

    return prob_eval if probabilistic else point_eval


_SYNTH_RE = re.compile(r"^synthetic(?:\(([^)]*)\))?$")


def make_evaluator(name: str = "analytic"):
    """Deterministic evaluator from a config string: analytic | mlp:<path>."""
    if name == "analytic":
        return analytic_evaluate
    if name.startswith("mlp:"):
        return _mlp_coefficient_evaluator(name[4:], probabilistic=False)
    raise ConfigError(f"unknown evaluator {name!r}")


def make_prob_evaluator(name: str = "synthetic"):
    """Probabilistic evaluator from a config string.

    Accepted forms: "synthetic", "synthetic(scd,scl,scm)", "mlp:<path>" (all
    three nets must carry gaussian heads).
    """
    m = _SYNTH_RE.match(name)
    if m:
        if m.group(1):
            try:
                sigmas = tuple(float(s) for s in m.group(1).split(","))
            except ValueError as exc:
                raise ConfigError(f"bad sigma list in {name!r}") from exc
        else:
            sigmas = DEFAULT_SIGMAS
        return synthetic_probabilistic(sigmas=sigmas)
    if name.startswith("mlp:"):
        return _mlp_coefficient_evaluator(name[4:], probabilistic=True)
    raise ConfigError(f"unknown probabilistic evaluator {name!r}")


def make_cp_evaluator(name: str = "analytic"):
    """Cp-curve evaluator from a config string: analytic | operator:<path>."""
    if name == "analytic":
        return analytic_cp
    if name.startswith("operator:"):
        model = load_model(name[len("operator:"):])
        if not isinstance(model, OperatorModel):
            raise ModelError("cp evaluator weight file must be an operator model")

        def evaluator(cst, flow, n_points: int = 81):
            theta = np.linspace(0.0, pi, n_points)
            x = 0.5 * (1.0 - np.cos(theta))
            coords = [(xi, "upper") for xi in x] + [(xi, "lower") for xi in x]
            return operator_infer(model, _model_input(cst, flow), coords)

        return evaluator
    raise ConfigError(f"unknown cp evaluator {name!r}")
