"""Empirical lower-tail risk (CVaR) estimation and the risk-based set filter.

A design's risk is judged on its lift distribution: draw m samples, average
the worst (lowest) floor((1-alpha)*m) of them, and require that tail mean to
clear a minimum acceptable lift.  The target is stored positive: the filter
retains a design iff the expected value of its worst-case lift outcomes is
still acceptably high.
"""

from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .evaluate import ScalarDistribution
from .sampling import DesignSet


@dataclass(frozen=True)
class RiskConfig:
    """Confidence level, lift target, and sampling budget for the risk filter."""

    alpha: float = 0.7
    var_target_cl: float = 0.70
    m: int = 200
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError(f"alpha {self.alpha} outside (0, 1)")
        if self.m < 2:
            raise ConfigError("m must be at least 2")

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "var_target_cl": self.var_target_cl,
            "m": self.m,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RiskConfig":
        return cls(**d)


@dataclass(frozen=True)
class RiskAssessment:
    """Lower-tail statistics of one design's lift draws."""

    tail_mean: float
    var_quantile: float
    k: int
    passed: bool
    mean: float = float("nan")
    std: float = float("nan")
    seed: int = 0

    def as_dict(self) -> dict:
        return {
            "tail_mean": self.tail_mean,
            "var_quantile": self.var_quantile,
            "k": self.k,
            "pass": self.passed,
            "mean": self.mean,
            "std": self.std,
            "seed": self.seed,
        }


def tail_size(m: int, alpha: float) -> int:
    """k = floor((1-alpha)*m), with a guard against float dust (0.3*10 < 3)."""
    return int(np.floor(np.round((1.0 - alpha) * m, 9)))


def empirical_cvar(samples, alpha: float) -> tuple[float, float, int]:
    """Lower-tail CVaR of a sample vector.

    Sorts ascending, takes k = floor((1-alpha)*m) smallest values, and returns
    (mean of those k, k-th smallest value, k).
    """
    samples = np.asarray(samples, dtype=float)
    m = samples.size
    if m < 2:
        raise ValueError("need at least 2 samples")
    k = tail_size(m, alpha)
    if k < 1:
        raise ConfigError(f"alpha {alpha} leaves an empty tail for m={m}")
    srt = np.sort(samples)
    return float(srt[:k].mean()), float(srt[k - 1]), k


def design_seed(run_seed: int, design_id: str) -> int:
    """Stable per-design RNG seed from the run seed and the design id.

    Hash-derived so the risk filter is independent of evaluation order and of
    which other designs are in the batch.
    """
    digest = hashlib.sha256(f"{run_seed}:{design_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def assess(dist: ScalarDistribution, cfg: RiskConfig, seed: int) -> RiskAssessment:
    """Draw m lift samples from ``dist`` and evaluate the tail against the target."""
    draws = dist.draw(cfg.m, seed)
    tail_mean, var_quantile, k = empirical_cvar(draws, cfg.alpha)
    return RiskAssessment(
        tail_mean=tail_mean,
        var_quantile=var_quantile,
        k=k,
        passed=tail_mean >= cfg.var_target_cl,
        mean=dist.mean,
        std=dist.std,
        seed=seed,
    )


def risk_filter(dset: DesignSet, evaluator, cfg: RiskConfig) -> DesignSet:
    """Retain designs whose lift tail mean clears the target.

    ``evaluator`` maps (cst, flow) to a PredictionDistribution.  Every member
    of the input set is annotated with its assessment (or the failure reason);
    only passing members appear in the output set.
    """
    survivors = []
    errors = 0
    for c in dset.members:
        try:
            dist = evaluator(c.cst, c.flow)
            result = assess(dist.cl, cfg, design_seed(cfg.seed, c.id))
        except Exception as exc:  # per-candidate isolation
            c.evaluations["risk"] = {"error": str(exc), "pass": False}
            errors += 1
            continue
        c.evaluations["risk"] = result.as_dict()
        if result.passed:
            survivors.append(c)
    return DesignSet(
        stage=dset.stage,
        members=survivors,
        provenance={
            "kind": "risk_filter",
            "alpha": cfg.alpha,
            "var_target_cl": cfg.var_target_cl,
            "m": cfg.m,
            "input_size": len(dset),
            "removed": len(dset) - len(survivors),
            "errors": errors,
        },
    )


REPORT_COLUMNS = ("id", "mean", "std", "var_quantile", "tail_mean", "pass")


def risk_report(dset: DesignSet, include_samples: bool = False) -> dict:
    """Tabulate per-design risk statistics for an assessed set.

    With ``include_samples`` the deterministic draws are regenerated from each
    design's stored (mean, std, seed) so the caller can build histograms.
    """
    rows = []
    samples = {}
    for c in dset.members:
        risk = c.evaluations.get("risk", {})
        rows.append(
            {
                "id": c.id,
                "mean": risk.get("mean"),
                "std": risk.get("std"),
                "var_quantile": risk.get("var_quantile"),
                "tail_mean": risk.get("tail_mean"),
                "pass": risk.get("pass"),
            }
        )
        if include_samples and "mean" in risk and "error" not in risk:
            dist = ScalarDistribution(risk["mean"], risk["std"])
            m = dset.provenance.get("m", 200)
            samples[c.id] = dist.draw(m, risk.get("seed", 0)).tolist()
    report = {"rows": rows}
    if include_samples:
        report["samples"] = samples
    return report


def risk_report_csv(dset: DesignSet) -> str:
    """CSV rendering of :func:`risk_report` (no sample dumps)."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in risk_report(dset)["rows"]:
        writer.writerow(row)
    return buf.getvalue()
