"""Run configuration: every stage's knobs in one serializable object."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import ConfigError
from ..geometry import FlowConditions
from ..risk import RiskConfig
from ..sampling import DISPLAY_NAMES, DesignSpace
from ..score import UtilityConfig

DIRECTIVE_DIRECTIONS = {"increase": 1.0, "decrease": -1.0, "+": 1.0, "-": -1.0}


def directive_direction(value) -> float:
    """Normalize a directive direction ("increase", -1, ...) to +/-1.0."""
    if isinstance(value, str):
        try:
            return DIRECTIVE_DIRECTIONS[value.lower()]
        except KeyError:
            raise ConfigError(f"unknown direction {value!r}") from None
    num = float(value)
    if num == 0.0:
        raise ConfigError("directive direction must be nonzero")
    return 1.0 if num > 0 else -1.0


def canonical_param(name: str, space: DesignSpace) -> str:
    """Resolve a parameter name or display alias to the space's internal name."""
    if name in space.names:
        return name
    for internal, display in DISPLAY_NAMES.items():
        if display == name and internal in space.names:
            return internal
    raise ConfigError(f"unknown design parameter {name!r}")


@dataclass(frozen=True)
class RefinePolicy:
    """How candidates step through the design space between filter stages.

    Automatic steps move the ``top_params`` most influential parameters of the
    primary objective metric by ``eta`` of each bound's width, in the direction
    the sensitivity report says improves the objective.  Explicit directives
    (param, direction, magnitude fraction) override the automatic step for the
    named parameter.
    """

    top_params: int = 4
    eta: float = 0.05
    objective: tuple = (("CL", 1.0),)
    directives: tuple = ()

    def __post_init__(self):
        if not 0.0 < self.eta <= 0.5:
            raise ConfigError(f"eta {self.eta} outside (0, 0.5]")
        if self.top_params < 1:
            raise ConfigError("top_params must be at least 1")
        obj = self.objective
        if isinstance(obj, dict):
            obj = tuple(sorted(obj.items()))
        object.__setattr__(self, "objective", tuple((str(m), float(w)) for m, w in obj))
        dirs = []
        for d in self.directives:
            if isinstance(d, dict):
                d = (d["param"], d["direction"], d.get("magnitude"))
            param, direction, magnitude = d
            dirs.append((str(param), directive_direction(direction),
                         None if magnitude is None else float(magnitude)))
        object.__setattr__(self, "directives", tuple(dirs))

    @property
    def primary_metric(self) -> tuple[str, float]:
        """(metric, goal sign) of the heaviest objective weight."""
        metric, weight = max(self.objective, key=lambda mw: abs(mw[1]))
        return metric, (1.0 if weight >= 0 else -1.0)

    def with_directives(self, directives) -> "RefinePolicy":
        return RefinePolicy(
            top_params=self.top_params,
            eta=self.eta,
            objective=self.objective,
            directives=tuple(directives),
        )

    def to_dict(self) -> dict:
        return {
            "top_params": self.top_params,
            "eta": self.eta,
            "objective": {m: w for m, w in self.objective},
            "directives": [
                {"param": p, "direction": d, "magnitude": m} for p, d, m in self.directives
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RefinePolicy":
        return cls(
            top_params=d.get("top_params", 4),
            eta=d.get("eta", 0.05),
            objective=d.get("objective", {"CL": 1.0}),
            directives=tuple(d.get("directives", ())),
        )


@dataclass(frozen=True)
class RunConfig:
    """Full configuration of a set-narrowing run."""

    seed: int = 0
    flow: FlowConditions = FlowConditions()
    space: DesignSpace = DesignSpace()
    n_initial: int = 1000
    strategy: str = "lhs"
    utility: UtilityConfig = UtilityConfig()
    stage2_threshold: float = 0.40
    stage2_top_k: int = 100
    stage3_base_n: int = 128
    stage4_alpha: float = 0.7
    stage4_var_target_cl: float = 0.70
    stage4_m: int = 200
    stage5_top_k: int = 50
    stage6_u_min: float = 0.41
    stage6_rating_min: int = 3
    refine: RefinePolicy = RefinePolicy()
    evaluator: str = "analytic"
    prob_evaluator: str = "synthetic"
    cp_evaluator: str = "analytic"
    cp_points: int = 81
    prominence_low: float = 0.4
    prominence_high: float = 0.8
    benchmark_cp_file: str | None = None
    report_top_k: int = 4

    def __post_init__(self):
        if self.n_initial < 1:
            raise ConfigError("n_initial must be at least 1")
        if self.strategy not in ("lhs", "sobol", "random"):
            raise ConfigError(f"unknown strategy {self.strategy!r}")
        if not 0.0 < self.prominence_low < self.prominence_high:
            raise ConfigError("need 0 < prominence_low < prominence_high")

    def risk_config(self) -> RiskConfig:
        return RiskConfig(
            alpha=self.stage4_alpha,
            var_target_cl=self.stage4_var_target_cl,
            m=self.stage4_m,
            seed=self.seed,
        )

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "flow": {"ma": self.flow.ma, "aoa_deg": self.flow.aoa_deg, "re": self.flow.re},
            "space": self.space.to_json_list(),
            "n_initial": self.n_initial,
            "strategy": self.strategy,
            "utility": self.utility.to_dict(),
            "stage2": {"threshold": self.stage2_threshold, "top_k": self.stage2_top_k},
            "stage3": {"base_n": self.stage3_base_n},
            "stage4": {
                "alpha": self.stage4_alpha,
                "var_target_cl": self.stage4_var_target_cl,
                "m": self.stage4_m,
            },
            "stage5": {"top_k": self.stage5_top_k},
            "stage6": {"u_min": self.stage6_u_min, "cp_rating_min": self.stage6_rating_min},
            "refine": self.refine.to_dict(),
            "evaluator": self.evaluator,
            "prob_evaluator": self.prob_evaluator,
            "cp_evaluator": self.cp_evaluator,
            "cp_points": self.cp_points,
            "rating": {
                "prominence_low": self.prominence_low,
                "prominence_high": self.prominence_high,
            },
            "benchmark_cp_file": self.benchmark_cp_file,
            "report_top_k": self.report_top_k,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        flow = d.get("flow", {})
        stage2 = d.get("stage2", {})
        stage3 = d.get("stage3", {})
        stage4 = d.get("stage4", {})
        stage5 = d.get("stage5", {})
        stage6 = d.get("stage6", {})
        rating = d.get("rating", {})
        space = d.get("space")
        return cls(
            seed=int(d.get("seed", 0)),
            flow=FlowConditions(
                ma=flow.get("ma", 0.6),
                aoa_deg=flow.get("aoa_deg", 2.5),
                re=flow.get("re", 6.3e6),
            ),
            space=DesignSpace.from_json_list(space) if space else DesignSpace(),
            n_initial=int(d.get("n_initial", 1000)),
            strategy=d.get("strategy", "lhs"),
            utility=UtilityConfig.from_dict(d["utility"]) if "utility" in d else UtilityConfig(),
            stage2_threshold=float(stage2.get("threshold", 0.40)),
            stage2_top_k=int(stage2.get("top_k", 100)),
            stage3_base_n=int(stage3.get("base_n", 128)),
            stage4_alpha=float(stage4.get("alpha", 0.7)),
            stage4_var_target_cl=float(stage4.get("var_target_cl", 0.70)),
            stage4_m=int(stage4.get("m", 200)),
            stage5_top_k=int(stage5.get("top_k", 50)),
            stage6_u_min=float(stage6.get("u_min", 0.41)),
            stage6_rating_min=int(stage6.get("cp_rating_min", 3)),
            refine=RefinePolicy.from_dict(d.get("refine", {})),
            evaluator=d.get("evaluator", "analytic"),
            prob_evaluator=d.get("prob_evaluator", "synthetic"),
            cp_evaluator=d.get("cp_evaluator", "analytic"),
            cp_points=int(d.get("cp_points", 81)),
            prominence_low=float(rating.get("prominence_low", 0.4)),
            prominence_high=float(rating.get("prominence_high", 0.8)),
            benchmark_cp_file=d.get("benchmark_cp_file"),
            report_top_k=int(d.get("report_top_k", 4)),
        )

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
