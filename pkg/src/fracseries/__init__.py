"""Series representations of fractional operators.

Riemann-Liouville integrals and derivatives and Caputo derivatives are
evaluated through Taylor-type series about the initial instant or the
current time, cross-checked against an independent singular-kernel
quadrature.
"""

from .errors import (
    ConvergenceError,
    DifferencingError,
    DivergenceError,
    DomainError,
    EstimationError,
    FracSeriesError,
    GammaOverflowError,
    NonAnalyticError,
    ParseError,
    PoleError,
    QuadratureError,
    RegimeError,
    RootNotFoundError,
    SegmentLookupError,
    UnsupportedError,
)
from .fracops import (
    DEFAULT_N,
    eval_power_integral,
    eval_series_current,
    eval_series_initial,
    eval_taylor_formula,
    eval_variable_order,
    evaluate,
    rl_from_caputo,
    truncation_bound,
)
from .funcmodel import (
    Affine,
    AnalyticFn,
    Combination,
    Exponential,
    Heaviside,
    Polynomial,
    Power,
    Sinusoid,
    TaylorHead,
    constant,
    convergence_radius,
    estimate_radius,
    ratio_test_radius,
    taylor_coefficients,
)
from .grammar import parse_function
from .operators import (
    Evaluation,
    Expansion,
    OperatorKind,
    OperatorSpec,
    PiecewiseOrder,
    Representation,
)

__version__ = "0.1.0"
