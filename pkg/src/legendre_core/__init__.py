"""
Legendre Lab Core Library

Exact algebra for powers of the Legendre differential expression, boundary
forms with extrapolated endpoint limits, domain classification, Galerkin
spectra and Chisholm-Everitt norm bounds.
"""

from .config import config
from .utils import (
    get_logger,
    set_log_level,
    LegendreError,
    ConfigError,
    ParseError,
    EvaluationError,
    QuadratureError,
    ExtrapolationError,
    OperatorError,
    ConditioningError,
    EigenSolverError,
    CEConfigurationError,
    BoundViolation,
)
from .polynomial import Polynomial, RationalFunction, legendre_polynomial
from .quadrature import (
    QuadratureRule,
    IntegralEstimate,
    legendre_eval,
    legendre_derivatives,
    gauss_legendre_rule,
    integrate,
    integrate_endpoint_graded,
    integrate_two_sided,
)
from .expr import parse, evaluate, differentiate, derivative_ladder, normalize, as_polynomial, to_text
from .operators import (
    DEFICIENCY_INDICES,
    legendre_stirling,
    legendre_stirling_triangle,
    StructuredOperator,
    ExpandedOperator,
    legendre_power,
    expand,
    compose,
    apply_symbolic,
    apply_numeric,
    indicial_roots,
)
from .forms import (
    BCFunction,
    BoundaryLimit,
    form1,
    form2,
    functional_B1,
    functional_B2,
    boundary_limit,
    form_limit,
    green_check,
    green_residual,
    gkn_bracket_difference,
    gkn_conditions,
    gkn_independence_matrix,
)
from .classify import Verdict, ClassificationReport, classify, classify_corpus, classify_power, elm_consistency
from .spectral import WeakForm, SpectrumResult, stiffness_matrix, gram_matrix, generalized_symmetric_eigenvalues, spectrum
from .ce import CEProblem, CEBoundReport, preset, K_of_x, K_sup, apply_A, apply_B, verify_bound, sharpness_probe

__version__ = "1.0.0"
__author__ = "Legendre Lab Project"

__all__ = [
    # Config
    "config",
    # Utils
    "get_logger",
    "set_log_level",
    "LegendreError",
    "ConfigError",
    "ParseError",
    "EvaluationError",
    "QuadratureError",
    "ExtrapolationError",
    "OperatorError",
    "ConditioningError",
    "EigenSolverError",
    "CEConfigurationError",
    "BoundViolation",
    # Polynomials
    "Polynomial",
    "RationalFunction",
    "legendre_polynomial",
    # Quadrature
    "QuadratureRule",
    "IntegralEstimate",
    "legendre_eval",
    "legendre_derivatives",
    "gauss_legendre_rule",
    "integrate",
    "integrate_endpoint_graded",
    "integrate_two_sided",
    # Expressions
    "parse",
    "evaluate",
    "differentiate",
    "derivative_ladder",
    "normalize",
    "as_polynomial",
    "to_text",
    # Operator Algebra
    "DEFICIENCY_INDICES",
    "legendre_stirling",
    "legendre_stirling_triangle",
    "StructuredOperator",
    "ExpandedOperator",
    "legendre_power",
    "expand",
    "compose",
    "apply_symbolic",
    "apply_numeric",
    "indicial_roots",
    # Boundary Forms
    "BCFunction",
    "BoundaryLimit",
    "form1",
    "form2",
    "functional_B1",
    "functional_B2",
    "boundary_limit",
    "form_limit",
    "green_check",
    "green_residual",
    "gkn_bracket_difference",
    "gkn_conditions",
    "gkn_independence_matrix",
    # Domain Classifier
    "Verdict",
    "ClassificationReport",
    "classify",
    "classify_corpus",
    "classify_power",
    "elm_consistency",
    # Spectral Solver
    "WeakForm",
    "SpectrumResult",
    "stiffness_matrix",
    "gram_matrix",
    "generalized_symmetric_eigenvalues",
    "spectrum",
    # Chisholm-Everitt
    "CEProblem",
    "CEBoundReport",
    "preset",
    "K_of_x",
    "K_sup",
    "apply_A",
    "apply_B",
    "verify_bound",
    "sharpness_probe",
]
