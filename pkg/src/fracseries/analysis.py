"""Consequences of the series representations.

Order sensitivity and order limits, scale and shift transforms, the
behaviour for a far-away initial instant, a catalog of closed forms, the
integral mean-value point and the loss of periodicity of operator values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, NamedTuple

import numpy as np

from .errors import DomainError, RegimeError, RootNotFoundError, UnsupportedError
from .fracops import DEFAULT_N, eval_series_initial, initial_series_sum
from .funcmodel import (
    AnalyticFn,
    Affine,
    Combination,
    Exponential,
    Heaviside,
    Polynomial,
    Sinusoid,
    convergence_radius,
)
from .operators import (
    Evaluation,
    OperatorKind,
    OperatorSpec,
    Representation,
    ceil_order,
    is_integer_order,
)
from .oracle import quad_caputo
from .specialfn import aux_incomplete_gamma, gamma, mittag_leffler, phi_factor, reciprocal_gamma

__all__ = [
    "ScaleTransform",
    "Side",
    "RegimeClass",
    "RatioClass",
    "AsymptoticRegime",
    "AsymptoticReplacement",
    "ClosedForm",
    "order_sensitivity",
    "order_limit",
    "scale_transform_eval",
    "scale_origin_eval",
    "time_shift_eval",
    "classify_regime",
    "rl_derivative_by_quadrature",
    "asymptotic_replacement",
    "closed_form",
    "closed_form_value",
    "mean_value_point",
    "mean_value_residual",
    "periodic_drift",
    "singularity_slope",
]

_RL_INT = OperatorKind.RL_INTEGRAL
_RL_DER = OperatorKind.RL_DERIVATIVE
_CAPUTO = OperatorKind.CAPUTO_DERIVATIVE


def _require_fractional(alpha: float):
    if not alpha > 0.0 or is_integer_order(alpha):
        raise DomainError(f"a positive non-integer order is required, got {alpha!r}")


def _require_inside(f: AnalyticFn, a: float, t: float):
    if not t > a:
        raise DomainError(f"t={t!r} must exceed the initial instant a={a!r}")
    r = convergence_radius(f, a)
    if not t - a < r:
        raise DomainError(f"t - a = {t - a!r} is outside the convergence radius {r!r}")


# ---------------------------------------------------------------- order

def order_sensitivity(f: AnalyticFn, spec: OperatorSpec, t: float, N: int = DEFAULT_N) -> float:
    r"""Derivative of the operator value with respect to its order.

    Each initial-instant term carries the weight
    :math:`\psi(k \mp \alpha + 1) - \ln(t-a)` with the sign flipped for
    the integral.
    """
    alpha, a, kind = spec.alpha, spec.a, spec.kind
    _require_fractional(alpha)
    _require_inside(f, a, t)
    h = t - a
    k0 = ceil_order(alpha) if kind is _CAPUTO else 0
    terms = []
    for k in range(k0, N + 1):
        d = f.derivative_at(k, a)
        if d == 0.0:
            continue
        if kind is _RL_INT:
            terms.append(-d * reciprocal_gamma(k + alpha + 1.0) * h ** (k + alpha) * phi_factor(k + 1, -alpha, t, a))
        else:
            terms.append(d * reciprocal_gamma(k - alpha + 1.0) * h ** (k - alpha) * phi_factor(k + 1, alpha, t, a))
    return math.fsum(terms)


class Side(Enum):
    FROM_BELOW = "below"  # alpha -> n-
    FROM_ABOVE = "above"  # alpha -> (n-1)+


def order_limit(
    f: AnalyticFn, kind: OperatorKind, n: int, side: Side, a: float, t: float, N: int = DEFAULT_N
) -> float:
    """Limit of the series value as the order tends to an end of (n-1, n).

    The series is evaluated at the integer end itself, where vanishing
    reciprocal gamma factors remove the degenerate terms.  The Caputo sum
    keeps starting at k = n from above, which produces the jump
    f^(n-1)(t) - f^(n-1)(a).
    """
    if n < 1:
        raise DomainError("order_limit needs n >= 1")
    _require_inside(f, a, t)
    alpha = float(n) if side is Side.FROM_BELOW else float(n - 1)
    k0 = n if kind is _CAPUTO else 0
    return initial_series_sum(f, kind, alpha, a, t, N, k0=k0)


# ---------------------------------------------------------------- scale transform

@dataclass(frozen=True)
class ScaleTransform:
    """x = lam * t + shift; the initial instant a maps to c = lam * a + shift."""

    lam: float
    shift: float = 0.0

    def __post_init__(self):
        if self.lam == 0.0:
            raise DomainError("scale factor must be non-zero")

    def c(self, a: float) -> float:
        return self.lam * a + self.shift

    def x(self, t: float) -> float:
        return self.lam * t + self.shift


def scale_transform_eval(
    f: AnalyticFn,
    st: ScaleTransform,
    alpha: float,
    a: float,
    t: float,
    N: int = DEFAULT_N,
    kind: OperatorKind = _RL_DER,
) -> tuple[float, float]:
    """(operator of f(lam t + shift) from a at t, lam^(+-alpha) times operator of f from c at x).

    Both sides are independent initial-instant series.  The orientation of
    the kernel requires lam > 0.
    """
    _require_fractional(alpha)
    if not st.lam > 0.0:
        raise DomainError("the scale transform identity needs lam > 0")
    g = Affine(f, st.lam, st.shift)
    lhs = eval_series_initial(g, OperatorSpec(kind, alpha, a), t, N).value
    inner = eval_series_initial(f, OperatorSpec(kind, alpha, st.c(a)), st.x(t), N).value
    power = -alpha if kind is _RL_INT else alpha
    return lhs, st.lam**power * inner


def scale_origin_eval(
    f: AnalyticFn, lam: float, alpha: float, t: float, N: int = DEFAULT_N, kind: OperatorKind = _RL_DER
) -> tuple[float, float]:
    """Pure scaling about the origin with initial instant 0."""
    return scale_transform_eval(f, ScaleTransform(lam, 0.0), alpha, 0.0, t, N, kind)


def time_shift_eval(
    f: AnalyticFn, alpha: float, a: float, t: float, N: int = DEFAULT_N, kind: OperatorKind = _RL_DER
) -> tuple[float, float]:
    """Operator of f(t - a) from a at t versus operator of f from 0 at t - a."""
    return scale_transform_eval(f, ScaleTransform(1.0, -a), alpha, a, t, N, kind)


# ---------------------------------------------------------------- far initial instant

CASE_RATIO = 100.0
BOTH_LARGE_MIN = 1e3
UNIT_BAND = (0.9, 1.1)


class RegimeClass(Enum):
    FINITE_A_LARGE_T = "finite-a-large-t"
    LARGE_NEG_A_FINITE_T = "large-negative-a-finite-t"
    BOTH_LARGE = "both-large"


class RatioClass(Enum):
    BELOW_ONE = "<1"
    ONE = "=1"
    ABOVE_ONE = ">1"


@dataclass(frozen=True)
class AsymptoticRegime:
    classification: RegimeClass
    ratio: RatioClass | None = None


class AsymptoticReplacement(NamedTuple):
    regime: AsymptoticRegime
    replacement_value: float
    correction: float


def classify_regime(a: float, t: float) -> AsymptoticRegime:
    """Deterministic classification of (a, t); the first matching rule wins."""
    if t > 0.0 and t >= CASE_RATIO * abs(a):
        return AsymptoticRegime(RegimeClass.FINITE_A_LARGE_T)
    if a < 0.0 and -a >= CASE_RATIO * abs(t):
        return AsymptoticRegime(RegimeClass.LARGE_NEG_A_FINITE_T)
    if a < 0.0 and t > 0.0 and min(-a, t) >= BOTH_LARGE_MIN:
        r = -a / t
        if r < UNIT_BAND[0]:
            ratio = RatioClass.BELOW_ONE
        elif r > UNIT_BAND[1]:
            ratio = RatioClass.ABOVE_ONE
        else:
            ratio = RatioClass.ONE
        return AsymptoticRegime(RegimeClass.BOTH_LARGE, ratio)
    raise RegimeError(f"(a={a!r}, t={t!r}) is in none of the asymptotic regimes")


def rl_derivative_by_quadrature(f: AnalyticFn, alpha: float, b: float, t: float, tol: float = 1e-10) -> float:
    """RL derivative from b as the Caputo integral plus its initial-value head.

    Avoids numerical differentiation, which matters for very long memories.
    """
    _require_fractional(alpha)
    n = ceil_order(alpha)
    h = t - b
    head = [f.derivative_at(k, b) * reciprocal_gamma(k - alpha + 1.0) * h ** (k - alpha) for k in range(n)]
    return math.fsum([quad_caputo(f, alpha, b, t, tol).value, *head])


def _finite_a_correction(f: AnalyticFn, alpha: float, a: float, t: float) -> float:
    return a * gamma(alpha + 1.0).value * math.sin(alpha * math.pi) * f(0.0) / (math.pi * t ** (alpha + 1.0))


def _far_a_correction(f: AnalyticFn, alpha: float, a: float, t: float) -> float:
    # sign chosen so that full ~ replacement + correction
    return -t * gamma(alpha + 1.0).value * math.sin(alpha * math.pi) * f(t + a) / (math.pi * (-a) ** (alpha + 1.0))


def asymptotic_replacement(
    f: AnalyticFn, alpha: float, a: float, t: float, tol: float = 1e-10
) -> AsymptoticReplacement:
    """Replace the RL derivative from a by one from 0 or from t + a.

    Returns the regime, the replacement value and the leading correction,
    signed so that the full value is approximately the sum of the two.
    The unit-ratio band has no stated correction and reports 0.
    """
    _require_fractional(alpha)
    regime = classify_regime(a, t)
    cls, ratio = regime.classification, regime.ratio
    if cls is RegimeClass.FINITE_A_LARGE_T or ratio is RatioClass.BELOW_ONE:
        value = rl_derivative_by_quadrature(f, alpha, 0.0, t, tol)
        return AsymptoticReplacement(regime, value, _finite_a_correction(f, alpha, a, t))
    if cls is RegimeClass.LARGE_NEG_A_FINITE_T or ratio is RatioClass.ABOVE_ONE:
        value = rl_derivative_by_quadrature(f, alpha, t + a, t, tol)
        return AsymptoticReplacement(regime, value, _far_a_correction(f, alpha, a, t))
    value = rl_derivative_by_quadrature(f, alpha, 0.0, t, tol)
    return AsymptoticReplacement(regime, value, 0.0)


# ---------------------------------------------------------------- closed forms

class ClosedForm(Enum):
    HEAVISIDE = "heaviside"
    EXP = "exp"
    EXP_GSTAR = "exp-gstar"
    SIN = "sin"


def _heaviside(step: float, spec: OperatorSpec, t: float) -> float:
    alpha, a = spec.alpha, spec.a
    if spec.kind is _CAPUTO:
        if step > a:
            raise UnsupportedError("the Caputo derivative of a step inside (a, t) is not defined")
        return 0.0
    # effective start of the unit constant
    s = max(step, a)
    if t < s:
        return 0.0
    if t == s:
        raise DomainError("closed form is singular at the step")
    if spec.kind is _RL_INT:
        return (t - s) ** alpha * reciprocal_gamma(alpha + 1.0)
    return (t - s) ** (-alpha) * reciprocal_gamma(1.0 - alpha)


def _exp_mittag_leffler(lam: float, spec: OperatorSpec, t: float) -> float:
    alpha, a = spec.alpha, spec.a
    h = t - a
    scale = math.exp(lam * a)
    if spec.kind is _RL_INT:
        return scale * h**alpha * mittag_leffler(1.0, 1.0 + alpha, lam * h)
    if spec.kind is _RL_DER:
        return scale * h ** (-alpha) * mittag_leffler(1.0, 1.0 - alpha, lam * h)
    n = spec.n
    return lam**n * scale * h ** (n - alpha) * mittag_leffler(1.0, 1.0 + n - alpha, lam * h)


def _exp_gstar(lam: float, spec: OperatorSpec, t: float) -> float:
    if not lam > 0.0:
        raise UnsupportedError("the incomplete gamma form needs a positive rate")
    alpha, a = spec.alpha, spec.a
    h = t - a
    x = lam * h
    if spec.kind is _RL_INT:
        return lam ** (-alpha) * math.exp(lam * t) * aux_incomplete_gamma(alpha, x)
    rl = lam**alpha * math.exp(lam * t) * aux_incomplete_gamma(-alpha, x)
    if spec.kind is _RL_DER:
        return rl
    head = [lam**k * math.exp(lam * a) * reciprocal_gamma(k - alpha + 1.0) * h ** (k - alpha) for k in range(spec.n)]
    return math.fsum([rl, *(-v for v in head)])


def _sinusoid_history(lam: float, phase: float, spec: OperatorSpec, t: float) -> float:
    # infinite-history idealization: the initial instant is ignored
    if not lam > 0.0:
        raise UnsupportedError("the sinusoid closed form needs a positive rate")
    alpha = spec.alpha
    shift = -alpha if spec.kind is _RL_INT else alpha
    return lam**shift * math.sin(lam * t + phase + shift * math.pi / 2.0)


def closed_form(name: ClosedForm, params: Mapping[str, float], spec: OperatorSpec, t: float) -> float:
    """Catalog of closed forms.

    ``params`` holds ``step`` for HEAVISIDE, ``lam`` for EXP and EXP_GSTAR,
    and ``lam`` and ``phase`` for SIN.
    """
    name = ClosedForm(name)
    alpha = spec.alpha
    if name is not ClosedForm.SIN and not t > spec.a:
        raise DomainError("closed forms are evaluated for t > a")
    if is_integer_order(alpha) and spec.kind.is_derivative:
        fn = {
            ClosedForm.HEAVISIDE: lambda: Heaviside(params.get("step", 0.0)),
            ClosedForm.EXP: lambda: Exponential(params.get("lam", 1.0)),
            ClosedForm.EXP_GSTAR: lambda: Exponential(params.get("lam", 1.0)),
            ClosedForm.SIN: lambda: Sinusoid(params.get("lam", 1.0), params.get("phase", 0.0)),
        }[name]()
        return float(fn.derivative_at(int(alpha), t))
    if name is ClosedForm.HEAVISIDE:
        return _heaviside(float(params.get("step", 0.0)), spec, t)
    if name is ClosedForm.EXP:
        return _exp_mittag_leffler(float(params.get("lam", 1.0)), spec, t)
    if name is ClosedForm.EXP_GSTAR:
        return _exp_gstar(float(params.get("lam", 1.0)), spec, t)
    return _sinusoid_history(float(params.get("lam", 1.0)), float(params.get("phase", 0.0)), spec, t)


def _closed_value(f: AnalyticFn, spec: OperatorSpec, t: float) -> float:
    if isinstance(f, Exponential):
        return closed_form(ClosedForm.EXP, {"lam": f.rate}, spec, t)
    if isinstance(f, Heaviside):
        return closed_form(ClosedForm.HEAVISIDE, {"step": f.step}, spec, t)
    if isinstance(f, Sinusoid) and spec.a == -math.inf:
        return closed_form(ClosedForm.SIN, {"lam": f.rate, "phase": f.phase}, spec, t)
    if isinstance(f, Polynomial):
        if not t > spec.a:
            raise DomainError("closed forms are evaluated for t > a")
        alpha = spec.alpha
        if spec.kind.is_derivative and is_integer_order(alpha):
            return float(f.derivative_at(int(alpha), t))
        # the initial-instant series of a polynomial is finite and exact
        return initial_series_sum(f, spec.kind, alpha, spec.a, t, len(f.coefficients) - 1)
    if isinstance(f, Combination):
        return math.fsum(s * _closed_value(fn, spec, t) for s, fn in f.terms)
    raise UnsupportedError(f"no closed form for {f!r} with initial instant {spec.a!r}")


def closed_form_value(f: AnalyticFn, spec: OperatorSpec, t: float) -> Evaluation:
    """Closed form for a parsed operand, dispatching on its family."""
    if not spec.is_constant:
        raise UnsupportedError("closed forms need a constant order")
    return Evaluation(_closed_value(f, spec, t), Representation.CLOSED_FORM)


# ---------------------------------------------------------------- mean value

MEAN_VALUE_SAMPLES = 64
MEAN_VALUE_XTOL = 1e-10


def _mean_value_target(f: AnalyticFn, alpha: float, a: float, t: float) -> float:
    n = ceil_order(alpha)
    h = t - a
    head = [f.derivative_at(k, a) * h**k / math.factorial(k) for k in range(n)]
    rest = math.fsum([f(t), *(-v for v in head)])
    return rest * gamma(alpha + 1.0).value / h**alpha


def mean_value_residual(f: AnalyticFn, alpha: float, a: float, t: float, xi: float, tol: float = 1e-12) -> float:
    """f(t) minus the Taylor head and the Caputo term evaluated at xi."""
    n = ceil_order(alpha)
    h = t - a
    head = [f.derivative_at(k, a) * h**k / math.factorial(k) for k in range(n)]
    cap = quad_caputo(f, alpha, a, xi, tol).value
    return math.fsum([f(t), *(-v for v in head), -cap * h**alpha * reciprocal_gamma(alpha + 1.0)])


def mean_value_point(f: AnalyticFn, alpha: float, a: float, t: float, tol: float = 1e-12) -> float:
    """First xi in (a, t] with Caputo D^alpha f(xi) equal to the mean-value target.

    The interval is sampled at 64 points and the first bracketed sign
    change is refined by bisection.
    """
    _require_fractional(alpha)
    if not t > a:
        raise DomainError("mean_value_point needs t > a")
    target = _mean_value_target(f, alpha, a, t)
    scale = max(1.0, abs(target))

    def g(xi: float) -> float:
        return quad_caputo(f, alpha, a, xi, tol).value - target

    h = t - a
    lo, g_lo = a, -target  # the Caputo derivative of a smooth f vanishes at a
    for i in range(1, MEAN_VALUE_SAMPLES + 1):
        xi = a + h * i / MEAN_VALUE_SAMPLES
        g_xi = g(xi)
        if abs(g_xi) <= 1e-13 * scale:
            return xi
        if g_lo * g_xi < 0.0:
            break
        lo, g_lo = xi, g_xi
    else:
        raise RootNotFoundError(f"no sign change of the mean-value equation on ({a!r}, {t!r})")
    hi = xi
    while hi - lo > MEAN_VALUE_XTOL:
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if g_mid == 0.0:
            return mid
        if (g_mid < 0.0) == (g_lo < 0.0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------- periodicity

def periodic_drift(f: AnalyticFn, alpha: float, a: float, t: float, tol: float = 1e-12) -> tuple[float, float]:
    """(Caputo value at t + T minus value at t, predicted leading correction).

    Both Caputo values are from the fixed initial instant ``a``.
    """
    _require_fractional(alpha)
    if not t > a:
        raise DomainError("periodic_drift needs t > a")
    if isinstance(f, Polynomial) and f.degree == 0:
        return 0.0, 0.0
    if not isinstance(f, Sinusoid) or f.rate == 0.0:
        raise DomainError("periodic_drift needs a sinusoid operand")
    T = f.period
    n = ceil_order(alpha)
    gap = quad_caputo(f, alpha, a, t + T, tol).value - quad_caputo(f, alpha, a, t, tol).value
    predicted = (
        -T
        * gamma(alpha + 1.0).value
        * math.sin(alpha * math.pi)
        / (math.pi * (t - a) ** (alpha + 1.0 - n))
        * (f.derivative_at(n, a) - f.derivative_at(n, t))
    )
    return gap, predicted


# ---------------------------------------------------------------- near the initial instant

def singularity_slope(
    f: AnalyticFn, spec: OperatorSpec, exponents=range(2, 7), N: int = DEFAULT_N
) -> float:
    """Least-squares slope of log|value| against log(t - a) for t - a = 10^-k."""
    hs = np.array([10.0 ** (-k) for k in exponents])
    values = [abs(eval_series_initial(f, spec, spec.a + h, N).value) for h in hs]
    slope, _ = np.polyfit(np.log(hs), np.log(values), 1)
    return float(slope)

