"""setfoil: risk-aware set-based airfoil design.

Samples a CST design space, evaluates candidates with pluggable surrogates,
scores them with nonlinear utilities, prunes with utility and lower-tail CVaR
filters, steers refinement with variance-based sensitivity analysis, and keeps
a human in the loop through a reviewable, replayable run directory.
"""

from .errors import ConfigError, ExhaustedSetError, ModelError, ParseError, StateError
from .evaluate import (
    CoefficientPrediction,
    CpCurve,
    MlpLayer,
    MlpModel,
    OperatorModel,
    PredictionDistribution,
    ScalarDistribution,
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
from .geometry import (
    AirfoilGeometry,
    CstParams,
    FlowConditions,
    export_coordinates,
    export_obj,
    generate_airfoil,
    parse_coordinates,
)
from .pipeline import (
    RefinePolicy,
    Run,
    RunConfig,
    benchmark_curve,
    build_report,
    project_pca2,
    rate_cp,
    refine,
    render_markdown,
    replay,
)
from .risk import RiskConfig, assess, design_seed, empirical_cvar, risk_filter, risk_report_csv
from .sampling import (
    DesignCandidate,
    DesignSet,
    DesignSpace,
    export_batch,
    import_batch,
    sample,
)
from .score import (
    BENCHMARK,
    DEFAULT_UTILITY,
    UtilityConfig,
    rank_by_utility,
    score_candidate,
    utility_cd,
    utility_cl,
    utility_cm,
    utility_combined,
    utility_filter,
)
from .sensitivity import (
    SensitivityReport,
    analyze,
    influence_signs,
    saltelli_sample,
    sobol_first_total,
    sobol_second_order,
)

__version__ = "0.1.0"

__all__ = [
    "AirfoilGeometry",
    "BENCHMARK",
    "CoefficientPrediction",
    "ConfigError",
    "CpCurve",
    "CstParams",
    "DEFAULT_UTILITY",
    "DesignCandidate",
    "DesignSet",
    "DesignSpace",
    "ExhaustedSetError",
    "FlowConditions",
    "MlpLayer",
    "MlpModel",
    "ModelError",
    "OperatorModel",
    "ParseError",
    "PredictionDistribution",
    "RefinePolicy",
    "RiskConfig",
    "Run",
    "RunConfig",
    "ScalarDistribution",
    "SensitivityReport",
    "StateError",
    "UtilityConfig",
    "analytic_cp",
    "analytic_evaluate",
    "analyze",
    "assess",
    "benchmark_curve",
    "build_report",
    "design_seed",
    "empirical_cvar",
    "export_batch",
    "export_coordinates",
    "export_obj",
    "gaussian_predict",
    "generate_airfoil",
    "import_batch",
    "influence_signs",
    "load_model",
    "make_cp_evaluator",
    "make_evaluator",
    "make_prob_evaluator",
    "mlp_infer",
    "operator_infer",
    "parse_coordinates",
    "project_pca2",
    "rank_by_utility",
    "rate_cp",
    "refine",
    "render_markdown",
    "replay",
    "risk_filter",
    "risk_report_csv",
    "saltelli_sample",
    "sample",
    "save_model",
    "score_candidate",
    "sobol_first_total",
    "sobol_second_order",
    "synthetic_probabilistic",
    "utility_cd",
    "utility_cl",
    "utility_cm",
    "utility_combined",
    "utility_filter",
]
