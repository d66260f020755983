r"""Reference values of the operators by direct quadrature.

Everything reduces to the kernel integral

.. math::

    K_\beta[g](a, t) = \frac{1}{\Gamma(\beta)} \int_a^t (t-\tau)^{\beta-1} g(\tau)\,d\tau .

On the last unit of the interval the substitution :math:`u = (t-\tau)^\beta`
turns it into :math:`\frac{1}{\Gamma(\beta+1)}\int_0^{w^\beta} g(t - u^{1/\beta})\,du`,
which has a bounded integrand for every :math:`\beta > 0`.  The remaining,
nonsingular part is integrated directly in unit chunks.  Both pieces use
an adaptive Gauss-Kronrod 7/15 rule evaluated on numpy arrays.

The RL derivative is obtained by differencing the RL integral in ``t``
(Richardson-extrapolated central differences).  It deliberately avoids the
RL/Caputo relation so that the relation can be tested against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DifferencingError, DomainError, QuadratureError
from .funcmodel import AnalyticFn
from .operators import OperatorKind, PiecewiseOrder, ceil_order, is_integer_order
from .specialfn import reciprocal_gamma

__all__ = [
    "QuadratureResult",
    "gauss_kronrod",
    "kernel_integral",
    "quad_rl_integral",
    "quad_caputo",
    "quad_rl_derivative",
    "quad_operator",
    "quad_variable_order",
    "quad_fixed_memory",
]

ABS_FLOOR = 1e-14
MAX_INTERVALS = 200_000
NEAR_WINDOW = 1.0

# Kronrod 15-point nodes (non-negative half) and weights; the odd-indexed
# nodes are the 7-point Gauss nodes.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
_WEIGHTS_K = np.concatenate([_WK[:-1], _WK[::-1]])
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[[1, 3, 5]] = _WG[:3]
_WEIGHTS_G[7] = _WG[3]
_WEIGHTS_G[[9, 11, 13]] = _WG[2::-1]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    est_error: float
    evaluations: int

    def __float__(self) -> float:
        return self.value

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            self.value + other.value, self.est_error + other.est_error, self.evaluations + other.evaluations
        )

    def scaled(self, factor: float) -> "QuadratureResult":
        return QuadratureResult(self.value * factor, self.est_error * abs(factor), self.evaluations)


def _rule(g, lo: np.ndarray, hi: np.ndarray):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(g(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    k = half * (fx @ _WEIGHTS_K)
    gs = half * (fx @ _WEIGHTS_G)
    return k, np.abs(k - gs)


def gauss_kronrod(
    g: Callable[[np.ndarray], np.ndarray],
    edges: Sequence[float],
    tol: float = 1e-10,
    abs_floor: float = ABS_FLOOR,
    max_intervals: int = MAX_INTERVALS,
) -> QuadratureResult:
    """Adaptive G7/K15 integration of a vectorized ``g`` over [edges[0], edges[-1]].

    ``edges`` gives the initial partition.  Intervals are bisected, largest
    error first, until the summed |K15 - G7| estimate falls below
    ``max(tol * |value|, abs_floor)``.
    """
    e = np.asarray(sorted(set(float(x) for x in edges)), dtype=float)
    if e.size < 2:
        return QuadratureResult(0.0, 0.0, 0)
    lo, hi = e[:-1], e[1:]
    vals, errs = _rule(g, lo, hi)
    evals = 15 * lo.size
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("integrand is not finite on the integration interval")
    while True:
        total = math.fsum(vals)
        err = float(np.sum(errs))
        target = max(tol * abs(total), abs_floor)
        if err <= target:
            return QuadratureResult(total, err, evals)
        if lo.size >= max_intervals:
            raise QuadratureError(
                f"tolerance {tol:g} not met within {max_intervals} intervals", total, err
            )
        order = np.argsort(errs)[::-1]
        # split the worst intervals until what is left could meet half the target
        cum = np.cumsum(errs[order])
        remaining = err - cum
        count = int(np.searchsorted(-remaining, -0.5 * target)) + 1
        count = max(1, min(count, order.size, max_intervals - lo.size))
        pick = order[:count]
        width = hi[pick] - lo[pick]
        splittable = width > 4.0 * np.finfo(float).eps * np.maximum(np.abs(lo[pick]), np.abs(hi[pick]))
        pick = pick[splittable]
        if pick.size == 0:
            raise QuadratureError("interval width reached machine resolution", total, err)
        mid = 0.5 * (lo[pick] + hi[pick])
        new_lo = np.concatenate([lo[pick], mid])
        new_hi = np.concatenate([mid, hi[pick]])
        v, r = _rule(g, new_lo, new_hi)
        evals += 15 * new_lo.size
        if not np.all(np.isfinite(v)):
            raise QuadratureError("integrand is not finite on the integration interval", total, err)
        keep = np.ones(lo.size, dtype=bool)
        keep[pick] = False
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        vals = np.concatenate([vals[keep], v])
        errs = np.concatenate([errs[keep], r])


def _chunks(lo: float, hi: float, width: float, extra: Sequence[float]) -> list[float]:
    n = max(1, math.ceil((hi - lo) / width))
    pts = [lo + (hi - lo) * i / n for i in range(n + 1)]
    pts.extend(x for x in extra if lo < x < hi)
    return pts


def kernel_integral(
    g: Callable[[np.ndarray], np.ndarray],
    beta: float,
    a: float,
    t: float,
    tol: float = 1e-10,
    breakpoints: Sequence[float] = (),
) -> QuadratureResult:
    """(1/Gamma(beta)) int_a^t (t - tau)^(beta - 1) g(tau) dtau for beta > 0."""
    if not beta > 0.0:
        raise DomainError("kernel exponent must be positive")
    if not t > a:
        if t == a:
            return QuadratureResult(0.0, 0.0, 0)
        raise DomainError(f"need t > a, got t={t!r}, a={a!r}")
    if not (math.isfinite(a) and math.isfinite(t)):
        raise DomainError("quadrature needs a finite interval")
    w = min(t - a, NEAR_WINDOW)
    umax = w**beta
    inv = 1.0 / beta

    def near(u):
        return g(t - u**inv)

    near_breaks = [(t - b) ** beta for b in breakpoints if t - w < b < t]
    # the substituted integrand spreads most of its variation near u = umax
    # when beta < 1 and near u = 0 when beta > 1; a few uniform cuts suffice
    res = gauss_kronrod(near, _chunks(0.0, umax, umax / 4.0, near_breaks), tol)
    res = res.scaled(reciprocal_gamma(beta + 1.0))
    if t - w > a:
        split = t - w

        def far(tau):
            return (t - tau) ** (beta - 1.0) * g(tau)

        far_res = gauss_kronrod(far, _chunks(a, split, 1.0, breakpoints), tol)
        far_res = far_res.scaled(reciprocal_gamma(beta))
        # each piece met its own relative target; cancellation between them
        # is measured against the size of the pieces, not of their sum
        scale = abs(res.value) + abs(far_res.value)
        res = res + far_res
        if res.est_error > max(tol * scale, ABS_FLOOR) * 1.5:
            raise QuadratureError("combined error estimate exceeds tolerance", res.value, res.est_error)
    return res


def _require_fractional(alpha: float) -> int:
    if not alpha > 0.0:
        raise DomainError("order must be positive")
    if is_integer_order(alpha):
        raise DomainError("quadrature oracle needs a non-integer order")
    return ceil_order(alpha)


def quad_rl_integral(f: AnalyticFn, alpha: float, a: float, t: float, tol: float = 1e-10) -> QuadratureResult:
    """RL integral of order ``alpha`` from ``a`` evaluated at ``t``."""
    if not alpha > 0.0:
        raise DomainError("order must be positive")
    return kernel_integral(f, alpha, a, t, tol, f.breakpoints())


def quad_caputo(f: AnalyticFn, alpha: float, a: float, t: float, tol: float = 1e-10) -> QuadratureResult:
    """Caputo derivative: RL integral of order n - alpha of f^(n)."""
    n = _require_fractional(alpha)
    return kernel_integral(lambda x: f.derivative_at(n, x), n - alpha, a, t, tol, f.breakpoints())


def _central_difference(F: Callable[[float], float], t: float, h: float, n: int) -> float:
    acc = [(-1) ** j * math.comb(n, j) * F(t + (0.5 * n - j) * h) for j in range(n + 1)]
    return math.fsum(acc) / h**n


def quad_rl_derivative(
    f: AnalyticFn, alpha: float, a: float, t: float, tol: float = 1e-10, max_levels: int = 7
) -> QuadratureResult:
    """RL derivative as d^n/dt^n of the RL integral of order n - alpha.

    Central differences with steps h, h/2, h/4, ... are combined in a
    Richardson table.  The result is accepted once two successive diagonal
    entries agree to ``tol`` (relative, with unit floor on the scale).
    """
    n = _require_fractional(alpha)
    if not t > a:
        raise DomainError("need t > a")
    beta = n - alpha
    inner_tol = max(min(tol * 1e-3, 1e-12), 1e-15)
    evals = 0

    def F(s: float) -> float:
        nonlocal evals
        r = kernel_integral(f, beta, a, s, inner_tol, f.breakpoints())
        evals += r.evaluations
        return r.value

    h = min(0.2, 0.25 * (t - a)) / n
    table: list[list[float]] = []
    best, spread = math.nan, math.inf
    for level in range(max_levels):
        row = [_central_difference(F, t, h, n)]
        for j in range(1, level + 1):
            prev = table[level - 1][j - 1]
            row.append(row[j - 1] + (row[j - 1] - prev) / (4.0**j - 1.0))
        table.append(row)
        if level >= 1:
            d = abs(row[-1] - table[level - 1][-1])
            if d < spread:
                best, spread = row[-1], d
            if d <= tol * max(1.0, abs(row[-1])):
                return QuadratureResult(row[-1], d, evals)
        h *= 0.5
    raise DifferencingError(
        f"Richardson estimates disagree by {spread:.3g} (tolerance {tol:g})", best, spread
    )


def quad_operator(
    f: AnalyticFn, kind: OperatorKind, alpha: float, a: float, t: float, tol: float = 1e-10
) -> QuadratureResult:
    """Dispatch on the operator kind; integer derivative orders are classical."""
    if kind.is_derivative and is_integer_order(alpha):
        return QuadratureResult(float(f.derivative_at(int(alpha), t)), 0.0, 1)
    if kind is OperatorKind.RL_INTEGRAL:
        return quad_rl_integral(f, alpha, a, t, tol)
    if kind is OperatorKind.RL_DERIVATIVE:
        return quad_rl_derivative(f, alpha, a, t, tol)
    return quad_caputo(f, alpha, a, t, tol)


def quad_variable_order(
    f: AnalyticFn, order: PiecewiseOrder, kind: OperatorKind, a: float, t: float, tol: float = 1e-10
) -> QuadratureResult:
    """Operator with the order in force at ``t`` applied over the whole kernel."""
    return quad_operator(f, kind, order.at(t, a), a, t, tol)


def quad_fixed_memory(f: AnalyticFn, alpha: float, L: float, t: float, tol: float = 1e-10) -> QuadratureResult:
    """Caputo derivative whose lower limit moves with time: from t - L to t."""
    if not L > 0.0:
        raise DomainError("memory length must be positive")
    return quad_caputo(f, alpha, t - L, t, tol)
