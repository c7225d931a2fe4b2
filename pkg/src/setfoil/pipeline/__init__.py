"""Staged set-narrowing pipeline: config, refinement, rating, runs, reports."""

from .config import RefinePolicy, RunConfig, canonical_param, directive_direction
from .pca import project_pca2
from .rating import (
    BENCHMARK_CST,
    CpRating,
    benchmark_curve,
    build_assessment,
    max_adverse_gradient,
    mid_chord_prominence,
    peak_suction,
    rate_cp,
    review_verdict,
)
from .refine import mean_cl_shift, plan_steps, refine
from .report import build_report, render_markdown
from .runner import Run, replay

__all__ = [
    "BENCHMARK_CST",
    "CpRating",
    "RefinePolicy",
    "Run",
    "RunConfig",
    "benchmark_curve",
    "build_assessment",
    "build_report",
    "canonical_param",
    "directive_direction",
    "max_adverse_gradient",
    "mean_cl_shift",
    "mid_chord_prominence",
    "peak_suction",
    "plan_steps",
    "project_pca2",
    "rate_cp",
    "refine",
    "render_markdown",
    "replay",
    "review_verdict",
]
