r"""Series evaluation of RL integrals, RL derivatives and Caputo derivatives.

Two expansions are provided for each operator.

* Initial instant: a power series in :math:`(t-a)` with coefficients
  :math:`f^{(k)}(a)/\Gamma(k \mp \alpha + 1)`.
* Current time: coefficients :math:`f^{(k)}(t)` weighted by generalized
  binomials :math:`\binom{-\alpha}{k}`, :math:`\binom{\alpha}{k}` or
  :math:`\binom{\alpha-n}{k-n}`.

A third representation keeps a finite head and computes the remainder
exactly by quadrature, so it is valid outside the disk of convergence.

Terms whose reciprocal gamma factor is exactly zero are skipped.  Integer
derivative orders are dispatched to classical differentiation.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import DivergenceError, DomainError, NonAnalyticError
from .funcmodel import AnalyticFn, convergence_radius, taylor_tail
from .operators import (
    Evaluation,
    Expansion,
    OperatorKind,
    OperatorSpec,
    Representation,
    ceil_order,
    is_integer_order,
)
from .oracle import kernel_integral
from .specialfn import gamma, gen_binomial, log_abs_gamma, reciprocal_gamma

__all__ = [
    "DEFAULT_N",
    "eval_series_initial",
    "eval_series_current",
    "eval_taylor_formula",
    "truncation_bound",
    "rl_from_caputo",
    "eval_variable_order",
    "eval_power_integral",
    "initial_series_sum",
    "current_series_sum",
    "evaluate",
]

DEFAULT_N = 40

_RL_INT = OperatorKind.RL_INTEGRAL
_RL_DER = OperatorKind.RL_DERIVATIVE
_CAPUTO = OperatorKind.CAPUTO_DERIVATIVE


def _signed(kind: OperatorKind, alpha: float) -> float:
    """Exponent shift: +alpha for the integral, -alpha for derivatives."""
    return alpha if kind is _RL_INT else -alpha


def _first_index(kind: OperatorKind, alpha: float) -> int:
    return ceil_order(alpha) if kind is _CAPUTO else 0


def _require(f: AnalyticFn, spec: OperatorSpec, t: float, N: int):
    if not f.analytic:
        raise NonAnalyticError("non-analytic operands are only handled by the closed-form path")
    if not spec.is_constant:
        raise DomainError("series evaluators need a constant order; use eval_variable_order")
    if not t > spec.a:
        raise DomainError(f"evaluation point t={t!r} must exceed the initial instant a={spec.a!r}")
    if N < 0:
        raise DomainError("truncation level N must be non-negative")


def _check_radius(f: AnalyticFn, center: float, h: float):
    r = convergence_radius(f, center)
    if not h < r:
        raise DivergenceError(f"t - a = {h!r} is not inside the convergence radius {r!r} about {center!r}")


def initial_series_sum(
    f: AnalyticFn, kind: OperatorKind, alpha: float, a: float, t: float, N: int, k0: int | None = None
) -> float:
    r"""sum_{k=k0}^{N} f^(k)(a) / Gamma(k -/+ alpha + 1) (t - a)^(k -/+ alpha).

    No integer-order dispatch happens here: at integer ``alpha`` the
    vanishing reciprocal gamma factors delete the degenerate terms, which
    is exactly the one-sided limit in the order.
    """
    s = _signed(kind, alpha)
    if k0 is None:
        k0 = _first_index(kind, alpha)
    h = t - a
    terms = []
    for k in range(k0, N + 1):
        rg = reciprocal_gamma(k + s + 1.0)
        if rg == 0.0:
            continue
        d = f.derivative_at(k, a)
        if d == 0.0:
            continue
        terms.append(d * rg * h ** (k + s))
    return math.fsum(terms)


def _current_weight(kind: OperatorKind, alpha: float, n: int, k: int) -> float:
    if kind is _RL_INT:
        return gen_binomial(-alpha, k)
    if kind is _RL_DER:
        return gen_binomial(alpha, k)
    return gen_binomial(alpha - n, k - n)


def current_series_sum(f: AnalyticFn, kind: OperatorKind, alpha: float, a: float, t: float, N: int) -> float:
    """Binomial-weighted sum of f^(k)(t) terms, truncated at k = N."""
    s = _signed(kind, alpha)
    n = ceil_order(alpha)
    k0 = n if kind is _CAPUTO else 0
    h = t - a
    terms = []
    for k in range(k0, N + 1):
        rg = reciprocal_gamma(k + s + 1.0)
        if rg == 0.0:
            continue
        w = _current_weight(kind, alpha, n, k)
        if w == 0.0:
            continue
        d = f.derivative_at(k, t)
        if d == 0.0:
            continue
        terms.append(w * d * rg * h ** (k + s))
    return math.fsum(terms)


def truncation_bound(epsilon: float, alpha: float, t: float, a: float) -> float:
    """epsilon (t - a)^(-alpha) / |Gamma(1 - alpha)|.

    ``epsilon`` bounds the Taylor tail of f over [a, t].  A negative
    ``alpha`` gives the corresponding cap for an RL integral of order
    ``-alpha``.
    """
    if not t > a:
        raise DomainError("truncation bound needs t > a")
    if epsilon < 0.0 or math.isnan(epsilon):
        raise DomainError("epsilon must be non-negative")
    if is_integer_order(alpha):
        raise DomainError("truncation bound needs a non-integer order")
    return epsilon * (t - a) ** (-alpha) * abs(reciprocal_gamma(1.0 - alpha))


def _bound(f: AnalyticFn, kind: OperatorKind, alpha: float, center: float, t: float, a: float, N: int):
    eps = taylor_tail(f, center, t - a, N)
    if not math.isfinite(eps):
        return None
    return truncation_bound(eps, -_signed(kind, alpha), t, a)


def _classical(f: AnalyticFn, spec: OperatorSpec, t: float) -> Evaluation:
    m = int(spec.alpha)
    return Evaluation(float(f.derivative_at(m, t)), Representation.CLOSED_FORM, None, None)


def eval_series_initial(f: AnalyticFn, spec: OperatorSpec, t: float, N: int = DEFAULT_N) -> Evaluation:
    """Initial-instant expansion truncated after the k = N term."""
    _require(f, spec, t, N)
    alpha = spec.alpha
    if spec.kind.is_derivative and is_integer_order(alpha):
        return _classical(f, spec, t)
    _check_radius(f, spec.a, t - spec.a)
    value = initial_series_sum(f, spec.kind, alpha, spec.a, t, N)
    bound = None if is_integer_order(alpha) else _bound(f, spec.kind, alpha, spec.a, t, spec.a, N)
    return Evaluation(value, Representation.INITIAL_EXPANSION, N, bound)


def eval_series_current(f: AnalyticFn, spec: OperatorSpec, t: float, N: int = DEFAULT_N) -> Evaluation:
    """Current-time expansion truncated after the k = N term."""
    _require(f, spec, t, N)
    alpha = spec.alpha
    if spec.kind.is_derivative and is_integer_order(alpha):
        return _classical(f, spec, t)
    _check_radius(f, t, t - spec.a)
    value = current_series_sum(f, spec.kind, alpha, spec.a, t, N)
    bound = None if is_integer_order(alpha) else _bound(f, spec.kind, alpha, t, t, spec.a, N)
    return Evaluation(value, Representation.CURRENT_EXPANSION, N, bound)


def _taylor_residual(f: AnalyticFn, center: float, N: int, j: int) -> Callable[[np.ndarray], np.ndarray]:
    """tau -> d^j/dtau^j [f(tau) - degree-N Taylor polynomial of f about center]."""
    coeffs = [f.derivative_at(k, center) / math.factorial(k - j) for k in range(j, N + 1)]

    def residual(tau):
        h = tau - center
        poly = 0.0 * h
        for c in reversed(coeffs):
            poly = poly * h + c
        return f.derivative_at(j, tau) - poly

    return residual


def eval_taylor_formula(
    f: AnalyticFn,
    spec: OperatorSpec,
    t: float,
    N: int = 10,
    quad_tol: float = 1e-10,
    expansion: Expansion = Expansion.INITIAL,
) -> Evaluation:
    """Finite head plus exact integral remainder.

    With the initial-instant head the remainder is
    ``(1/Gamma(N -/+ alpha + 1)) int_a^t (t - tau)^(N -/+ alpha) f^(N+1)(tau) dtau``.
    With the current-time head the remainder is the operator applied to
    ``f - P_N``, where ``P_N`` is the degree-N Taylor polynomial about ``t``;
    for the RL derivative the residual's own initial values contribute the
    usual head terms.
    """
    _require(f, spec, t, N)
    alpha, a, kind = spec.alpha, spec.a, spec.kind
    if kind.is_derivative and is_integer_order(alpha):
        return _classical(f, spec, t)
    n = ceil_order(alpha)
    breaks = f.breakpoints()
    if expansion is Expansion.INITIAL:
        if kind is _CAPUTO and N < n:
            raise DomainError(f"the Caputo Taylor formula needs N >= n = {n}")
        if kind is _RL_DER and N < n - 1:
            raise DomainError(f"the RL Taylor formula needs N >= n - 1 = {n - 1}")
        head = initial_series_sum(f, kind, alpha, a, t, N)
        beta = N + _signed(kind, alpha) + 1.0
        rem = kernel_integral(lambda x: f.derivative_at(N + 1, x), beta, a, t, quad_tol, breaks)
        return Evaluation(head + rem.value, Representation.TAYLOR_FORMULA, N, None)
    head = current_series_sum(f, kind, alpha, a, t, N)
    if kind is _RL_INT:
        rem = kernel_integral(_taylor_residual(f, t, N, 0), alpha, a, t, quad_tol, breaks).value
    else:
        rem = kernel_integral(_taylor_residual(f, t, N, n), n - alpha, a, t, quad_tol, breaks).value
        if kind is _RL_DER:
            extra = [
                float(_taylor_residual(f, t, N, k)(a)) * reciprocal_gamma(k - alpha + 1.0) * (t - a) ** (k - alpha)
                for k in range(n)
            ]
            rem = math.fsum([rem, *extra])
    return Evaluation(head + rem, Representation.TAYLOR_FORMULA, N, None)


def rl_from_caputo(f: AnalyticFn, alpha: float, a: float, t: float, N: int = DEFAULT_N) -> Evaluation:
    """RL derivative as the Caputo series plus the initial-value head terms."""
    if is_integer_order(alpha) or not alpha > 0.0:
        raise DomainError("rl_from_caputo needs a positive non-integer order")
    n = ceil_order(alpha)
    if N < n:
        raise DomainError(f"rl_from_caputo needs N >= n = {n}")
    cap = eval_series_initial(f, OperatorSpec(_CAPUTO, alpha, a), t, N)
    head = [
        f.derivative_at(k, a) * reciprocal_gamma(k - alpha + 1.0) * (t - a) ** (k - alpha) for k in range(n)
    ]
    return Evaluation(math.fsum([cap.value, *head]), Representation.INITIAL_EXPANSION, N, cap.bound)


def eval_variable_order(
    f: AnalyticFn, spec: OperatorSpec, t: float, N: int = DEFAULT_N, expansion: Expansion = Expansion.INITIAL
) -> Evaluation:
    """Piecewise-constant order: the order in force at ``t`` acts on the whole kernel."""
    alpha = spec.order_at(t)
    constant = spec.at_order(alpha)
    if expansion is Expansion.CURRENT:
        return eval_series_current(f, constant, t, N)
    return eval_series_initial(f, constant, t, N)


def eval_power_integral(nu: float, alpha_t: float, a: float, t: float) -> float:
    """RL integral of (t - a)^nu: Gamma(nu+1)/Gamma(nu+alpha+1) (t - a)^(nu+alpha)."""
    if not nu > -1.0:
        raise DomainError("power integral needs nu > -1")
    if not alpha_t > 0.0:
        raise DomainError("order must be positive")
    if not t > a:
        raise DomainError("power integral needs t > a")
    lg_num, _ = log_abs_gamma(nu + 1.0)
    lg_den, _ = log_abs_gamma(nu + alpha_t + 1.0)
    if nu + alpha_t < 150.0:
        ratio = gamma(nu + 1.0).value * reciprocal_gamma(nu + alpha_t + 1.0)
    else:
        ratio = math.exp(lg_num - lg_den)
    return ratio * (t - a) ** (nu + alpha_t)


def evaluate(
    f: AnalyticFn, spec: OperatorSpec, t: float, N: int = DEFAULT_N, expansion: Expansion = Expansion.INITIAL
) -> Evaluation:
    """Series evaluation for constant or piecewise orders."""
    if not spec.is_constant:
        return eval_variable_order(f, spec, t, N, expansion)
    if expansion is Expansion.CURRENT:
        return eval_series_current(f, spec, t, N)
    return eval_series_initial(f, spec, t, N)
