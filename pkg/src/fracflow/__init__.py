"""Fractional (time-subordinated) kinetics of interacting-particle densities."""

from .errors import (
    AccuracyError,
    DegenerateError,
    DivergenceError,
    DomainError,
    EvaluationOverflowError,
    FracflowError,
    SizeError,
)
from .specfun import (
    EvalResult,
    FracOrder,
    gamma_ln,
    mittag_leffler,
    mittag_leffler_log,
    wright_log_pdf,
    wright_median,
    wright_moment,
    wright_pdf,
    wright_tail,
)
from .subordination import (
    CorrelationSequence,
    DensityFlow,
    GrowthClass,
    QuadratureSpec,
    check_convergence,
    subordinate_correlations,
    subordinate_correlations_log,
    subordinate_density,
    subordinate_scalar,
)

from .models import (
    ContactModel,
    FrontIndicatorModel,
    PolynomialModel,
    PureBirthModel,
    StretchedExpModel,
    front_position,
    subordinated_corr,
    subordinated_corr_log,
)
from .configspace import CylinderFunction, FiniteConfiguration, Window, k_inverse, k_transform
from .intermittency import Partition, Thresholds, classify, classify_all

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "ContactModel",
    "CorrelationSequence",
    "CylinderFunction",
    "DegenerateError",
    "DensityFlow",
    "DivergenceError",
    "DomainError",
    "EvalResult",
    "EvaluationOverflowError",
    "FiniteConfiguration",
    "FracOrder",
    "FracflowError",
    "FrontIndicatorModel",
    "GrowthClass",
    "Partition",
    "PolynomialModel",
    "PureBirthModel",
    "QuadratureSpec",
    "SizeError",
    "StretchedExpModel",
    "Thresholds",
    "Window",
    "check_convergence",
    "classify",
    "classify_all",
    "front_position",
    "gamma_ln",
    "k_inverse",
    "k_transform",
    "mittag_leffler",
    "mittag_leffler_log",
    "subordinate_correlations",
    "subordinate_correlations_log",
    "subordinate_density",
    "subordinate_scalar",
    "subordinated_corr",
    "subordinated_corr_log",
    "wright_log_pdf",
    "wright_median",
    "wright_moment",
    "wright_pdf",
    "wright_tail",
]
