"""Sensitivity-guided modification of a candidate set."""

from __future__ import annotations

import re

import numpy as np

from ..errors import ConfigError
from ..geometry import CstParams
from ..sampling import DesignCandidate, DesignSet, DesignSpace
from ..sensitivity import SensitivityReport
from .config import RefinePolicy, canonical_param


def _next_numeric_id(dset: DesignSet) -> int:
    best = 0
    for cid in dset.ids():
        m = re.fullmatch(r"ID-(\d+)", cid)
        if m:
            best = max(best, int(m.group(1)))
    return best + 1


def plan_steps(
    space: DesignSpace,
    report: SensitivityReport,
    policy: RefinePolicy,
) -> dict:
    """Per-parameter signed step sizes (in design units) for one refinement.

    Automatic steps cover the top parameters of the primary objective metric;
    explicit directives replace or extend them.
    """
    metric, goal = policy.primary_metric
    if metric not in report.metrics:
        raise ConfigError(f"sensitivity report lacks metric {metric!r}")
    widths = dict(zip(space.names, space.upper() - space.lower()))
    display_to_internal = dict(zip(space.display_names, space.names))
    steps = {}
    for display in report.ranking(metric)[: policy.top_params]:
        internal = display_to_internal.get(display, display)
        if internal not in widths:
            continue
        direction = goal * report.sign_of(metric, display)
        steps[internal] = direction * policy.eta * widths[internal]
    for param, direction, magnitude in policy.directives:
        internal = canonical_param(param, space)
        fraction = policy.eta if magnitude is None else magnitude
        steps[internal] = direction * fraction * widths[internal]
    return steps


def refine(
    dset: DesignSet,
    report: SensitivityReport,
    policy: RefinePolicy,
    space: DesignSpace | None = None,
    id_start: int | None = None,
    stage: int | None = None,
) -> DesignSet:
    """Step every candidate through the design space, clipped to bounds.

    Children receive fresh ids and lineage records pointing at their parents;
    the output set has exactly one child per input member.
    """
    space = space or DesignSpace()
    steps = plan_steps(space, report, policy)
    if id_start is None:
        id_start = _next_numeric_id(dset)
    if stage is None:
        stage = dset.stage + 1
    name_index = {n: i for i, n in enumerate(space.names)}
    directive_summary = ", ".join(
        f"{'+' if s > 0 else '-'}{n}" for n, s in sorted(steps.items())
    )
    children = []
    for j, parent in enumerate(dset.members):
        vec = parent.cst.as_vector()
        for name, step in steps.items():
            vec[name_index[name]] += step
        vec = space.clip(vec)
        children.append(
            DesignCandidate(
                id=f"ID-{id_start + j}",
                cst=CstParams.from_vector(vec, y_te=parent.cst.y_te),
                flow=parent.flow,
                lineage={
                    "parent": parent.id,
                    "stage": dset.stage,
                    "directive": directive_summary,
                },
            )
        )
    return DesignSet(
        stage=stage,
        members=children,
        provenance={
            "kind": "refine",
            "steps": {k: float(v) for k, v in steps.items()},
            "parents": dset.ids(),
        },
    )


def mean_cl_shift(parents: DesignSet, children: DesignSet, evaluator, flow=None) -> tuple[float, float]:
    """(parent mean C_L, child mean C_L) under a deterministic evaluator."""
    def mean_cl(dset):
        vals = [evaluator(c.cst, flow or c.flow).cl for c in dset.members]
        return float(np.mean(vals))

    return mean_cl(parents), mean_cl(children)
