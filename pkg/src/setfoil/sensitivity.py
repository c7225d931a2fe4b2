"""Variance-based global sensitivity analysis and the heuristic design report.

The Saltelli design (matrices A, B, and the 2P column-swapped cross matrices,
N(2P+2) rows total) supports first-order indices via the Saltelli 2010
estimator and total-effect indices via the Jansen estimator.  Influence
directions come from Spearman rank correlations on the A rows.  The report
turns rankings and signs into deterministic natural-language refinement rules.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc, spearmanr

from .sampling import DesignSpace

METRICS = ("CL", "CD", "CM")


@dataclass(frozen=True)
class SaltelliDesign:
    """Sample matrices for Sobol index estimation over a box-bounded space."""

    base_n: int
    dims: int
    a: np.ndarray  # (N, P)
    b: np.ndarray  # (N, P)
    cross_ab: tuple  # P matrices: A with column i replaced by B's
    cross_ba: tuple  # P matrices: B with column i replaced by A's

    @property
    def total_rows(self) -> int:
        return self.base_n * (2 * self.dims + 2)

    def rows(self) -> np.ndarray:
        """All evaluation points stacked: A, B, A_B^(1..P), B_A^(1..P)."""
        return np.vstack([self.a, self.b, *self.cross_ab, *self.cross_ba])


def saltelli_sample(space: DesignSpace, base_n: int, seed: int = 0) -> SaltelliDesign:
    """Build the Saltelli design from a scrambled Sobol stream over 2P dims.

    ``base_n`` should be a power of two for Sobol balance; other sizes are
    allowed but flagged with a warning.
    """
    p = len(space.bounds)
    if base_n < 2:
        raise ValueError("base_n must be at least 2")
    if base_n & (base_n - 1):
        warnings.warn(f"base_n={base_n} is not a power of two; Sobol balance degrades")
    engine = qmc.Sobol(d=2 * p, scramble=True, seed=seed)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        unit = engine.random(base_n)
    lo, hi = space.lower(), space.upper()
    a = qmc.scale(unit[:, :p], lo, hi)
    b = qmc.scale(unit[:, p:], lo, hi)
    cross_ab, cross_ba = [], []
    for i in range(p):
        abi = a.copy()
        abi[:, i] = b[:, i]
        cross_ab.append(abi)
        bai = b.copy()
        bai[:, i] = a[:, i]
        cross_ba.append(bai)
    return SaltelliDesign(
        base_n=base_n,
        dims=p,
        a=a,
        b=b,
        cross_ab=tuple(cross_ab),
        cross_ba=tuple(cross_ba),
    )


def _split_outputs(design: SaltelliDesign, outputs) -> tuple:
    outputs = np.asarray(outputs, dtype=float).ravel()
    if outputs.size != design.total_rows:
        raise ValueError(
            f"outputs length {outputs.size} != design rows {design.total_rows}"
        )
    n, p = design.base_n, design.dims
    f_a = outputs[:n]
    f_b = outputs[n : 2 * n]
    f_ab = [outputs[(2 + i) * n : (3 + i) * n] for i in range(p)]
    return f_a, f_b, f_ab


def sobol_first_total(design: SaltelliDesign, outputs) -> tuple[np.ndarray, np.ndarray]:
    """First-order and total-effect Sobol indices from evaluated design rows.

    S_i uses the Saltelli 2010 estimator, S_Ti the Jansen estimator; both are
    normalized by the variance of the pooled A and B outputs.  Outputs are
    centered by the pooled mean first, which makes the estimates exactly
    invariant under affine rescaling of the model output.
    """
    f_a, f_b, f_ab = _split_outputs(design, outputs)
    pooled = np.concatenate([f_a, f_b])
    mu = pooled.mean()
    var = pooled.var()
    if var <= 0.0 or not np.isfinite(var):
        raise ValueError("degenerate outputs: zero variance over the design")
    f_a = f_a - mu
    f_b = f_b - mu
    s_first = np.empty(design.dims)
    s_total = np.empty(design.dims)
    for i in range(design.dims):
        f_abi = f_ab[i] - mu
        s_first[i] = np.mean(f_b * (f_abi - f_a)) / var
        s_total[i] = 0.5 * np.mean((f_a - f_abi) ** 2) / var
    return s_first, s_total


def sobol_second_order(space: DesignSpace, f, pair: tuple[int, int], n_grid: int = 32, reps: int = 64, seed: int = 0) -> float:
    """Reference-grade interaction index S_ij via binned conditional means.

    Draws n_grid^2 * reps uniform points, bins them on the (i, j) pair, and
    forms S_ij = (V[E(Y|X_i,X_j)] - V_i - V_j) / V(Y).  ``f`` maps an (n, P)
    array of rows to n outputs.  Intended as a test oracle, not a production
    path: cost grows quadratically with n_grid.
    """
    if n_grid < 16:
        raise ValueError("n_grid must be at least 16")
    i, j = pair
    p = len(space.bounds)
    lo, hi = space.lower(), space.upper()
    n = n_grid * n_grid * reps
    rng = np.random.default_rng(seed)
    x = lo + rng.random((n, p)) * (hi - lo)
    y = np.asarray(f(x), dtype=float).ravel()
    var = y.var()
    if var <= 0.0:
        raise ValueError("degenerate outputs: zero variance")
    mu = y.mean()

    def binned_variance(cell_idx: np.ndarray, n_cells: int) -> float:
        counts = np.bincount(cell_idx, minlength=n_cells)
        sums = np.bincount(cell_idx, weights=y, minlength=n_cells)
        filled = counts > 0
        means = sums[filled] / counts[filled]
        # Variance of the conditional mean, cells weighted by occupancy.
        return float(np.sum(counts[filled] * (means - mu) ** 2) / n)

    def bin_of(col: int) -> np.ndarray:
        u = (x[:, col] - lo[col]) / (hi[col] - lo[col])
        return np.minimum((u * n_grid).astype(int), n_grid - 1)

    bi, bj = bin_of(i), bin_of(j)
    v_ij = binned_variance(bi * n_grid + bj, n_grid * n_grid)
    v_i = binned_variance(bi, n_grid)
    v_j = binned_variance(bj, n_grid)
    return (v_ij - v_i - v_j) / var


def influence_signs(matrix: np.ndarray, outputs) -> tuple[np.ndarray, np.ndarray]:
    """Spearman rank correlation of each design column against one metric.

    Returns (signs, correlations); a zero correlation yields sign 0.
    """
    outputs = np.asarray(outputs, dtype=float).ravel()
    rhos = np.empty(matrix.shape[1])
    for col in range(matrix.shape[1]):
        rho = spearmanr(matrix[:, col], outputs).statistic
        rhos[col] = 0.0 if np.isnan(rho) else rho
    return np.sign(rhos), rhos


@dataclass
class SensitivityReport:
    """Per-metric Sobol indices, influence directions, and templated heuristics."""

    names: list
    metrics: dict  # metric -> {s_first, s_total, sign, rho, ranking}
    heuristics: list
    base_n: int = 0
    total_rows: int = 0
    extras: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "metrics": self.metrics,
            "heuristics": list(self.heuristics),
            "base_n": self.base_n,
            "total_rows": self.total_rows,
            "extras": self.extras,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SensitivityReport":
        return cls(
            names=d["names"],
            metrics=d["metrics"],
            heuristics=d["heuristics"],
            base_n=d.get("base_n", 0),
            total_rows=d.get("total_rows", 0),
            extras=d.get("extras", {}),
        )

    def ranking(self, metric: str) -> list:
        return self.metrics[metric]["ranking"]

    def sign_of(self, metric: str, name: str) -> float:
        idx = list(self.names).index(name)
        return float(self.metrics[metric]["sign"][idx])

    def to_markdown(self) -> str:
        lines = ["# Sensitivity analysis", ""]
        lines.append(
            f"Saltelli design: N={self.base_n}, P={len(self.names)}, "
            f"{self.total_rows} evaluation rows."
        )
        for metric in self.metrics:
            m = self.metrics[metric]
            lines.append("")
            lines.append(f"## {metric}")
            top = ", ".join(m["ranking"][:4])
            lines.append(f"Most significant parameters for {metric}: {top}.")
            lines.append("")
            lines.append("| parameter | S_i | S_Ti | direction |")
            lines.append("| --- | --- | --- | --- |")
            order = [list(self.names).index(n) for n in m["ranking"]]
            for idx in order:
                direction = {1.0: "+", -1.0: "-", 0.0: "0"}[float(np.sign(m["sign"][idx]))]
                lines.append(
                    f"| {self.names[idx]} | {m['s_first'][idx]:.4f} "
                    f"| {m['s_total'][idx]:.4f} | {direction} |"
                )
        lines.append("")
        lines.append("## Heuristics")
        for rule in self.heuristics:
            lines.append(f"- {rule}")
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["metric", "parameter", "s_first", "s_total", "sign", "rho"])
        for metric, m in self.metrics.items():
            for idx, name in enumerate(self.names):
                writer.writerow(
                    [
                        metric,
                        name,
                        f"{m['s_first'][idx]:.6f}",
                        f"{m['s_total'][idx]:.6f}",
                        int(np.sign(m["sign"][idx])),
                        f"{m['rho'][idx]:.6f}",
                    ]
                )
        return buf.getvalue()


def synthesize_report(
    names,
    indices: dict,
    signs: dict,
    top_k: int = 4,
    base_n: int = 0,
    total_rows: int = 0,
) -> SensitivityReport:
    """Assemble the heuristic report from computed indices and signs.

    ``indices`` maps metric -> (s_first, s_total); ``signs`` maps metric ->
    (sign array, rho array).  For each metric the top_k parameters by total
    effect become rules "increasing <param> will <increase|decrease> <metric>".
    """
    names = list(names)
    metrics = {}
    heuristics = []
    for metric in indices:
        s_first, s_total = indices[metric]
        sign, rho = signs[metric]
        order = np.argsort(-np.asarray(s_total), kind="stable")
        ranking = [names[i] for i in order]
        metrics[metric] = {
            "s_first": list(np.asarray(s_first, dtype=float)),
            "s_total": list(np.asarray(s_total, dtype=float)),
            "sign": list(np.asarray(sign, dtype=float)),
            "rho": list(np.asarray(rho, dtype=float)),
            "ranking": ranking,
        }
        for i in order[:top_k]:
            verb = "increase" if sign[i] >= 0 else "decrease"
            heuristics.append(f"increasing {names[i]} will {verb} {metric}")
    return SensitivityReport(
        names=names,
        metrics=metrics,
        heuristics=heuristics,
        base_n=base_n,
        total_rows=total_rows,
    )


def analyze(
    space: DesignSpace,
    row_evaluator,
    base_n: int = 128,
    seed: int = 0,
    top_k: int = 4,
    names=None,
) -> SensitivityReport:
    """Full stage: design, evaluate, estimate, and synthesize the report.

    ``row_evaluator`` maps an (n, P) array of design rows to a dict of metric
    name -> n outputs.
    """
    design = saltelli_sample(space, base_n, seed)
    rows = design.rows()
    outputs = row_evaluator(rows)
    indices = {}
    signs = {}
    n = design.base_n
    for metric, values in outputs.items():
        values = np.asarray(values, dtype=float)
        indices[metric] = sobol_first_total(design, values)
        signs[metric] = influence_signs(design.a, values[:n])
    return synthesize_report(
        names=list(names) if names is not None else space.display_names,
        indices=indices,
        signs=signs,
        top_k=top_k,
        base_n=base_n,
        total_rows=design.total_rows,
    )
