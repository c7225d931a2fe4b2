"""Utility scoring of coefficient predictions and utility-based set filtering.

The three component utilities reward high lift (hard viability floor at
C_L = 0.5), low drag (exponential decay), and mild pitching moment (linear
ramp on [-0.30, 0]).  The combined score is a fixed-weight sum used by both
the broad early filter and the stricter final review threshold.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, sqrt

from .errors import ConfigError, StateError
from .evaluate import CoefficientPrediction
from .sampling import DesignSet


@dataclass(frozen=True)
class UtilityConfig:
    """Weights, clamps, and thresholds of the utility model."""

    w_cl: float = 0.5
    w_cd: float = 0.3
    w_cm: float = 0.2
    cl_floor: float = 0.5
    cl_cap: float = 1.2
    cl_penalty: float = -5.0
    cd_rate: float = 65.0
    cm_floor: float = -0.30
    stage2_threshold: float = 0.40
    stage6_threshold: float = 0.41

    def __post_init__(self):
        if abs(self.w_cl + self.w_cd + self.w_cm - 1.0) > 1e-9:
            raise ConfigError("utility weights must sum to 1")
        for t in (self.stage2_threshold, self.stage6_threshold):
            if not 0.0 <= t <= 1.0:
                raise ConfigError(f"threshold {t} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "w_cl": self.w_cl,
            "w_cd": self.w_cd,
            "w_cm": self.w_cm,
            "cl_floor": self.cl_floor,
            "cl_cap": self.cl_cap,
            "cl_penalty": self.cl_penalty,
            "cd_rate": self.cd_rate,
            "cm_floor": self.cm_floor,
            "stage2_threshold": self.stage2_threshold,
            "stage6_threshold": self.stage6_threshold,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "UtilityConfig":
        return cls(**d)


DEFAULT_UTILITY = UtilityConfig()

# Reference design the final-review rubric compares against.
BENCHMARK = CoefficientPrediction(cd=0.010, cl=0.522, cm=-0.073)


@dataclass(frozen=True)
class UtilityScore:
    u_cl: float
    u_cd: float
    u_cm: float
    u_comb: float

    def as_dict(self) -> dict:
        return {
            "u_cl": self.u_cl,
            "u_cd": self.u_cd,
            "u_cm": self.u_cm,
            "u_comb": self.u_comb,
        }


def utility_cl(cl: float, cfg: UtilityConfig = DEFAULT_UTILITY) -> float:
    """Lift utility: hard penalty below the viability floor, then a square-root
    ramp that saturates at the cap."""
    if cl < cfg.cl_floor:
        return cfg.cl_penalty
    clamped = min(max(cl, cfg.cl_floor), cfg.cl_cap)
    return sqrt((clamped - cfg.cl_floor) / (cfg.cl_cap - cfg.cl_floor))


def utility_cd(cd: float, cfg: UtilityConfig = DEFAULT_UTILITY) -> float:
    """Drag utility: exponential decay, 1 at zero drag."""
    return exp(-cfg.cd_rate * cd)


def utility_cm(cm: float, cfg: UtilityConfig = DEFAULT_UTILITY) -> float:
    """Moment utility: linear ramp from 0 at the floor to 1 at zero moment."""
    clamped = min(max(cm, cfg.cm_floor), 0.0)
    return (clamped - cfg.cm_floor) / -cfg.cm_floor


def utility_combined(pred: CoefficientPrediction, cfg: UtilityConfig = DEFAULT_UTILITY) -> UtilityScore:
    u_cl = utility_cl(pred.cl, cfg)
    u_cd = utility_cd(pred.cd, cfg)
    u_cm = utility_cm(pred.cm, cfg)
    return UtilityScore(
        u_cl=u_cl,
        u_cd=u_cd,
        u_cm=u_cm,
        u_comb=cfg.w_cl * u_cl + cfg.w_cd * u_cd + cfg.w_cm * u_cm,
    )


def score_candidate(candidate, cfg: UtilityConfig = DEFAULT_UTILITY) -> UtilityScore:
    """Compute and attach the utility score from stored point coefficients."""
    coeffs = candidate.evaluations.get("coefficients")
    if coeffs is None:
        raise StateError(f"{candidate.id} has no coefficient prediction")
    score = utility_combined(CoefficientPrediction(**coeffs), cfg)
    candidate.evaluations["utility"] = score.as_dict()
    return score


def _id_order(cid: str):
    # "ID-12" sorts numerically; anything else falls back to string order.
    head, _, tail = cid.partition("-")
    if head == "ID" and tail.isdigit():
        return (0, int(tail), cid)
    return (1, 0, cid)


def _stored_u_comb(candidate) -> float:
    utility = candidate.evaluations.get("utility")
    if utility is None or "u_comb" not in utility:
        raise StateError(f"{candidate.id} has no utility score")
    return float(utility["u_comb"])


def utility_filter(
    dset: DesignSet,
    cfg: UtilityConfig = DEFAULT_UTILITY,
    threshold: float | None = None,
    top_k: int | None = None,
) -> DesignSet:
    """Keep members with u_comb >= threshold, then the top_k highest of those.

    Ties in the top_k cut are broken by candidate id order.  Every member must
    already carry a utility score.
    """
    if threshold is None:
        threshold = cfg.stage2_threshold
    scored = [(c, _stored_u_comb(c)) for c in dset.members]
    survivors = [(c, u) for c, u in scored if u >= threshold]
    if top_k is not None:
        survivors = sorted(survivors, key=lambda cu: (-cu[1], _id_order(cu[0].id)))[:top_k]
        # Restore input ordering for stable downstream iteration.
        keep = {c.id for c, _ in survivors}
        survivors = [(c, u) for c, u in scored if c.id in keep]
    kept_ids = {c.id for c, _ in survivors}
    removed = [c.id for c, _ in scored if c.id not in kept_ids]
    return DesignSet(
        stage=dset.stage,
        members=[c for c, _ in survivors],
        provenance={
            "kind": "utility_filter",
            "threshold": threshold,
            "top_k": top_k,
            "input_size": len(dset),
            "removed": len(removed),
        },
    )


def rank_by_utility(dset: DesignSet) -> list:
    """Members in descending u_comb order, ties broken by id."""
    return sorted(
        dset.members,
        key=lambda c: (-_stored_u_comb(c), _id_order(c.id)),
    )
