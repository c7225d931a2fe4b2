"""Candidate generation over the bounded 9-parameter CST design space.

Three sampling strategies are exposed: Latin hypercube (stratified), Sobol
(low-discrepancy, unscrambled so runs are reproducible across machines), and
plain uniform random with per-candidate splittable seeding.  Batches move in
and out of the engine as JSON documents with "samples" and "designid" keys.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .errors import ConfigError, ParseError
from .geometry import CstParams, FlowConditions

# Default CST weight bounds for the supported design family.
DEFAULT_BOUNDS = (
    ("CST1", 0.0644, 0.1932),
    ("CST2", 0.0688, 0.2064),
    ("CST3", 0.0961, 0.2883),
    ("CST4", 0.0961, 0.2882),
    ("CST5", 0.1010, 0.3030),
    ("CST6", 0.0680, 0.2039),
    ("CST7", 0.1126, 0.3377),
    ("CST8", 0.0381, 0.1143),
    ("CST9", -0.0586, -0.0195),
)

# Display aliases: CST1..CST5 are upper-surface weights, CST6..CST9 the free
# lower-surface weights (the first lower weight is tied to CST1).
DISPLAY_NAMES = {
    "CST1": "CST_U1",
    "CST2": "CST_U2",
    "CST3": "CST_U3",
    "CST4": "CST_U4",
    "CST5": "CST_U5",
    "CST6": "CST_L2",
    "CST7": "CST_L3",
    "CST8": "CST_L4",
    "CST9": "CST_L5",
}

STATUSES = ("active", "filtered", "valid", "invalid")


@dataclass(frozen=True)
class DesignSpace:
    """Box bounds for the nine CST weights plus the supported flow ranges."""

    bounds: tuple = DEFAULT_BOUNDS
    flow_bounds: tuple = (
        FlowConditions.MA_RANGE,
        FlowConditions.AOA_RANGE,
        FlowConditions.RE_RANGE,
    )

    def __post_init__(self):
        bounds = tuple((str(n), float(lo), float(hi)) for n, lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        names = [n for n, _, _ in bounds]
        if len(set(names)) != len(names):
            raise ConfigError("duplicate bound names")
        if not bounds:
            raise ConfigError("empty design space")
        for n, lo, hi in bounds:
            if not lo < hi:
                raise ConfigError(f"bound {n}: lower {lo} not below upper {hi}")

    @property
    def names(self) -> list[str]:
        return [n for n, _, _ in self.bounds]

    @property
    def display_names(self) -> list[str]:
        return [DISPLAY_NAMES.get(n, n) for n in self.names]

    def lower(self) -> np.ndarray:
        return np.array([lo for _, lo, _ in self.bounds])

    def upper(self) -> np.ndarray:
        return np.array([hi for _, _, hi in self.bounds])

    def contains(self, vec) -> bool:
        vec = np.asarray(vec, dtype=float)
        return bool(np.all(vec >= self.lower()) and np.all(vec <= self.upper()))

    def clip(self, vec) -> np.ndarray:
        return np.clip(np.asarray(vec, dtype=float), self.lower(), self.upper())

    def to_json_list(self) -> list[dict]:
        return [{"name": n, "lower": lo, "upper": hi} for n, lo, hi in self.bounds]

    @classmethod
    def from_json_list(cls, doc) -> "DesignSpace":
        """Build a space from an override file: a JSON list of name/lower/upper."""
        if not isinstance(doc, list):
            raise ParseError("design-space override must be a list")
        try:
            bounds = tuple((d["name"], float(d["lower"]), float(d["upper"])) for d in doc)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad design-space entry: {exc}") from exc
        return cls(bounds=bounds)


@dataclass
class DesignCandidate:
    """One airfoil design plus everything the workflow has learned about it."""

    id: str
    cst: CstParams
    flow: FlowConditions
    lineage: dict | None = None  # {"parent": id, "stage": k, "directive": text}
    evaluations: dict = field(default_factory=dict)
    status: str = "active"
    in_bounds: bool = True

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    def row(self) -> list[float]:
        """Batch-document row: Ma, AoA, Re, then the nine CST weights."""
        return [self.flow.ma, self.flow.aoa_deg, self.flow.re, *self.cst.as_vector().tolist()]

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "cst": self.cst.as_vector().tolist(),
            "y_te": self.cst.y_te,
            "flow": list(self.flow.as_tuple()),
            "lineage": self.lineage,
            "evaluations": self.evaluations,
            "status": self.status,
            "in_bounds": self.in_bounds,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DesignCandidate":
        return cls(
            id=d["id"],
            cst=CstParams.from_vector(d["cst"], y_te=d.get("y_te", 0.0)),
            flow=FlowConditions(*d["flow"]),
            lineage=d.get("lineage"),
            evaluations=d.get("evaluations", {}),
            status=d.get("status", "active"),
            in_bounds=d.get("in_bounds", True),
        )


@dataclass
class DesignSet:
    """An ordered candidate set at one stage of the shrinking-sequence workflow."""

    stage: int
    members: list[DesignCandidate]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [c.id for c in self.members]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate candidate ids in set")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def ids(self) -> list[str]:
        return [c.id for c in self.members]

    def get(self, cid: str) -> DesignCandidate:
        for c in self.members:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def matrix(self) -> np.ndarray:
        """(n, 9) array of CST vectors in member order."""
        return np.array([c.cst.as_vector() for c in self.members])

    def to_dict(self) -> dict:
        return {
            "stage": self.stage,
            "members": [c.to_dict() for c in self.members],
            "provenance": self.provenance,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "DesignSet":
        return cls(
            stage=d["stage"],
            members=[DesignCandidate.from_dict(m) for m in d["members"]],
            provenance=d.get("provenance", {}),
        )


def _unit_samples(n: int, dim: int, strategy: str, seed: int) -> np.ndarray:
    if strategy == "lhs":
        sampler = qmc.LatinHypercube(d=dim, seed=seed)
        return sampler.random(n)
    if strategy == "sobol":
        # Unscrambled, starting from the first point of the sequence: the
        # seed does not perturb the points, only the strategy is quasi-random.
        sampler = qmc.Sobol(d=dim, scramble=False)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UserWarning)  # non power-of-two n
            return sampler.random(n)
    if strategy == "random":
        # Splittable per-candidate streams: row i depends only on (seed, i),
        # so draws are independent of generation order and batch size.
        out = np.empty((n, dim))
        for i in range(n):
            out[i] = np.random.default_rng([seed, i]).uniform(size=dim)
        return out
    raise ConfigError(f"unknown sampling strategy {strategy!r}")


def sample(
    space: DesignSpace,
    n: int,
    strategy: str = "lhs",
    flow: FlowConditions | None = None,
    seed: int = 0,
    stage: int = 1,
    id_start: int = 1,
) -> DesignSet:
    """Draw ``n`` candidates from ``space`` at a fixed flow condition.

    Ids are assigned in generation order as ID-<id_start>, ID-<id_start+1>, ...
    Identical (space, n, strategy, seed) arguments give identical output.
    """
    if n < 1:
        raise ConfigError("n must be at least 1")
    if len(space.bounds) != 9:
        raise ConfigError("candidate sampling needs the 9-parameter CST space")
    flow = flow or FlowConditions()
    unit = _unit_samples(n, len(space.bounds), strategy, seed)
    vecs = qmc.scale(unit, space.lower(), space.upper())
    members = [
        DesignCandidate(
            id=f"ID-{id_start + i}",
            cst=CstParams.from_vector(vecs[i]),
            flow=flow,
        )
        for i in range(n)
    ]
    return DesignSet(
        stage=stage,
        members=members,
        provenance={"kind": "sample", "strategy": strategy, "seed": seed, "n": n},
    )


def export_batch(dset: DesignSet) -> dict:
    """Batch document: {"samples": n rows of [Ma, AoA, Re, CST1..CST9], "designid": ids}."""
    return {
        "samples": [c.row() for c in dset.members],
        "designid": dset.ids(),
    }


def import_batch(doc: dict, space: DesignSpace, stage: int = 1) -> DesignSet:
    """Reconstruct a candidate set from a batch document.

    Rows whose CST coordinates fall outside ``space`` are flagged via
    ``in_bounds=False`` rather than rejected.
    """
    if not isinstance(doc, dict) or "samples" not in doc or "designid" not in doc:
        raise ParseError('batch document must contain "samples" and "designid"')
    samples, ids = doc["samples"], doc["designid"]
    if len(samples) != len(ids):
        raise ParseError(f"samples ({len(samples)}) and designid ({len(ids)}) length mismatch")
    members = []
    for j, row in enumerate(samples):
        try:
            row = [float(v) for v in row]
        except (TypeError, ValueError) as exc:
            raise ParseError(f"non-numeric value: {exc}", row=j) from exc
        if len(row) != 12:
            raise ParseError(f"expected 12 values, got {len(row)}", row=j)
        vec = np.array(row[3:])
        members.append(
            DesignCandidate(
                id=str(ids[j]),
                cst=CstParams.from_vector(vec),
                flow=FlowConditions(*row[:3]),
                in_bounds=space.contains(vec),
            )
        )
    return DesignSet(stage=stage, members=members, provenance={"kind": "import"})
