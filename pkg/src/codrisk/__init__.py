"""Conditional distortion risk measures and risk contributions via copulas."""

from .copula import (
    FGM,
    Comonotonic,
    Copula,
    CopulaFamily,
    DependenceNotion,
    Gumbel,
    Independence,
    build_copula,
    check_dependence,
    concordance_leq,
    cond_tail_cdf,
    cond_tail_quantile,
    tail_weight,
)
from .distortion import (
    Distortion,
    DistortionKind,
    StieltjesMeasure,
    build_distortion,
    dominates,
    dual,
    dual_measure,
    measure,
)
from .exceptions import (
    CodDegenerateConditioningError,
    CodDivergenceError,
    CodDomainError,
    CodError,
    CodInconsistencyError,
    CodInsufficientAcceptanceError,
    CodNumericalError,
    CodUnsupportedError,
)
from .figures import ExperimentSpec, run_figure
from .marginal import (
    Exponential,
    Gamma,
    Marginal,
    MarginalFamily,
    Normal,
    Uniform,
    Weibull,
    build_marginal,
    integrated_tail,
    is_dfr,
    quantile,
)
from .models import (
    ClassicMeasures,
    FigureTable,
    McEstimate,
    OrderVerdict,
    RiskResult,
)
from .oracle import mc_cod, mc_cod_at, mc_delta_cod
from .orders import StochasticOrder, check_order
from .riskcore import (
    BivariateModel,
    classic_measures,
    cod,
    cod_at,
    cod_by_definition,
    delta_cod,
    delta_cod_at,
    delta_cod_type2,
    delta_cod_type2_at,
    distortion_measure,
    psi_convexity,
    threshold_quantile,
)

__all__ = [
    "FGM",
    "BivariateModel",
    "ClassicMeasures",
    "CodDegenerateConditioningError",
    "CodDivergenceError",
    "CodDomainError",
    "CodError",
    "CodInconsistencyError",
    "CodInsufficientAcceptanceError",
    "CodNumericalError",
    "CodUnsupportedError",
    "Comonotonic",
    "Copula",
    "CopulaFamily",
    "DependenceNotion",
    "Distortion",
    "DistortionKind",
    "ExperimentSpec",
    "Exponential",
    "FigureTable",
    "Gamma",
    "Gumbel",
    "Independence",
    "Marginal",
    "MarginalFamily",
    "McEstimate",
    "Normal",
    "OrderVerdict",
    "RiskResult",
    "StieltjesMeasure",
    "StochasticOrder",
    "Uniform",
    "Weibull",
    "build_copula",
    "build_distortion",
    "build_marginal",
    "check_dependence",
    "check_order",
    "classic_measures",
    "cod",
    "cod_at",
    "cod_by_definition",
    "concordance_leq",
    "cond_tail_cdf",
    "cond_tail_quantile",
    "delta_cod",
    "delta_cod_at",
    "delta_cod_type2",
    "delta_cod_type2_at",
    "distortion_measure",
    "dominates",
    "dual",
    "dual_measure",
    "integrated_tail",
    "is_dfr",
    "mc_cod",
    "mc_cod_at",
    "mc_delta_cod",
    "measure",
    "psi_convexity",
    "quantile",
    "run_figure",
    "tail_weight",
    "threshold_quantile",
]
