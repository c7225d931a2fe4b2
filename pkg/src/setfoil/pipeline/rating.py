"""Pressure-curve rubric rating and candidate assessment records.

The rubric compares a candidate's upper-surface pressure distribution against
a benchmark curve: a pronounced mid-chord suction bump caps the rating at 1 or
2 depending on severity; otherwise the rating starts at 3 and earns a bonus
for a gentler adverse recovery gradient and another for a milder peak suction
than the benchmark (strict comparisons, so the benchmark itself rates 3).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..evaluate import CpCurve, analytic_cp
from ..geometry import CstParams, FlowConditions
from ..score import BENCHMARK, utility_combined

# Synthetic stand-in for the benchmark section: the design-space centroid,
# evaluated by the analytic Cp model.  Used when no measured curve is supplied.
BENCHMARK_CST = CstParams(
    w_u=(0.1288, 0.1376, 0.1922, 0.19215, 0.2020),
    w_l=(0.13595, 0.22515, 0.0762, -0.03905),
)

MID_CHORD = (0.3, 0.6)


@dataclass(frozen=True)
class CpRating:
    """Rubric outcome for one pressure curve."""

    rating: int
    peak_prominence: float
    notes: tuple = ()

    def as_dict(self) -> dict:
        return {
            "rating": self.rating,
            "peak_prominence": self.peak_prominence,
            "notes": list(self.notes),
        }


def benchmark_curve(flow: FlowConditions, n_points: int = 81, path=None) -> CpCurve:
    """Benchmark Cp curve: user-supplied JSON file, or the synthetic fallback."""
    if path:
        with open(path) as fh:
            return CpCurve.from_dict(json.load(fh))
    return analytic_cp(BENCHMARK_CST, flow, n_points)


def mid_chord_prominence(curve: CpCurve, window: tuple = MID_CHORD) -> float:
    """Depth of the deepest upper-surface suction bump inside the window.

    Measured against the straight line joining Cp at the window edges; a
    positive value means the curve dips below (more suction than) that line.
    """
    x0, x1 = window
    x, cp = curve.x, curve.cp_upper
    if x.min() > x0 or x.max() < x1:
        raise ValueError(f"curve does not span the [{x0}, {x1}] window")
    inside = (x >= x0) & (x <= x1)
    xs = np.concatenate([[x0], x[inside], [x1]])
    cps = np.concatenate([[np.interp(x0, x, cp)], cp[inside], [np.interp(x1, x, cp)]])
    line = cps[0] + (xs - x0) * (cps[-1] - cps[0]) / (x1 - x0)
    return float(np.max(line - cps))


def max_adverse_gradient(curve: CpCurve) -> float:
    """Steepest chordwise increase of upper-surface Cp (pressure recovery)."""
    grads = np.diff(curve.cp_upper) / np.diff(curve.x)
    return float(np.max(grads))


def peak_suction(curve: CpCurve) -> float:
    """Magnitude of the strongest upper-surface suction."""
    return float(-np.min(curve.cp_upper))


def rate_cp(
    curve: CpCurve,
    benchmark: CpCurve,
    prominence_low: float = 0.4,
    prominence_high: float = 0.8,
) -> CpRating:
    """Apply the rubric; both curves must span the mid-chord window."""
    prominence = mid_chord_prominence(curve)
    notes = []
    if prominence >= prominence_high:
        notes.append(f"severe mid-chord suction bump (prominence {prominence:.3f})")
        return CpRating(rating=1, peak_prominence=prominence, notes=tuple(notes))
    if prominence >= prominence_low:
        notes.append(f"pronounced mid-chord suction bump (prominence {prominence:.3f})")
        return CpRating(rating=2, peak_prominence=prominence, notes=tuple(notes))
    rating = 3
    if max_adverse_gradient(curve) < max_adverse_gradient(benchmark):
        rating += 1
        notes.append("gentler adverse recovery gradient than benchmark")
    if peak_suction(curve) < peak_suction(benchmark):
        rating += 1
        notes.append("milder peak suction than benchmark")
    return CpRating(rating=min(max(rating, 1), 5), peak_prominence=prominence, notes=tuple(notes))


def review_verdict(u_comb: float, rating: int, u_min: float = 0.41, rating_min: int = 3) -> str:
    """Automated stage-6 rule: valid iff both the utility and rating bars clear."""
    return "valid" if u_comb >= u_min and rating >= rating_min else "invalid"


BENCH_UTILITY = utility_combined(BENCHMARK)


def build_assessment(candidate, rating: CpRating, verdict: str, risk_target: float) -> str:
    """Deterministic review-queue summary for one candidate."""
    coeffs = candidate.evaluations.get("coefficients", {})
    utility = candidate.evaluations.get("utility", {})
    risk = candidate.evaluations.get("risk", {})
    parts = [
        "CD = {:.4f} vs benchmark {:.4f}".format(coeffs.get("cd", float("nan")), BENCHMARK.cd),
        "CL = {:.4f} vs {:.4f}".format(coeffs.get("cl", float("nan")), BENCHMARK.cl),
        "CM = {:.4f} vs {:.4f}".format(coeffs.get("cm", float("nan")), BENCHMARK.cm),
        "U_comb = {:.4f} vs {:.4f}".format(utility.get("u_comb", float("nan")), BENCH_UTILITY.u_comb),
    ]
    if "tail_mean" in risk:
        rel = ">=" if risk["tail_mean"] >= risk_target else "<"
        parts.append(
            "CL tail mean {:.4f} {} target {:.2f}".format(risk["tail_mean"], rel, risk_target)
        )
    parts.append(f"Cp rating {rating.rating} (prominence {rating.peak_prominence:.3f})")
    for note in rating.notes:
        parts.append(note)
    parts.append(f"Verdict: {verdict}")
    return "; ".join(parts) + "."
