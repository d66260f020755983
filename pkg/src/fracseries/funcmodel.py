"""Operand functions with exact derivatives and convergence-radius metadata.

Every family evaluates on Python floats (through :mod:`math`) and on numpy
arrays (through :mod:`numpy`) with the same code, selected by the type of
the argument.  Families are immutable and closed under addition and scalar
multiplication; :class:`Affine` gives ``f(lam * x + shift)``, which the
scale-transform checks need.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, EstimationError, NonAnalyticError

__all__ = [
    "AnalyticFn",
    "Polynomial",
    "Exponential",
    "Sinusoid",
    "Power",
    "Heaviside",
    "Affine",
    "Combination",
    "TaylorHead",
    "derivative_at",
    "taylor_coefficients",
    "convergence_radius",
    "estimate_radius",
    "ratio_test_radius",
    "taylor_tail",
    "constant",
]


def _is_scalar(x) -> bool:
    return np.ndim(x) == 0


def _ns(x):
    return math if _is_scalar(x) else np


def _finish(x, value):
    return float(value) if _is_scalar(x) else value


def _falling(p: float, k: int) -> float:
    acc = 1.0
    for j in range(k):
        acc *= p - j
    return acc


def _exp_tail(x: float, n: int) -> float:
    """sum_{k > n} x^k / k! for x >= 0, summed from the first omitted term."""
    if x == 0.0:
        return 0.0
    if x > n + 1:
        # the head dominates; subtracting from exp(x) is accurate here
        head = math.fsum(x**k / math.factorial(k) for k in range(n + 1))
        return max(math.exp(x) - head, 0.0)
    term = math.exp((n + 1) * math.log(x) - math.lgamma(n + 2))
    acc = []
    k = n + 1
    while term > 1e-17 * (acc[0] if acc else term) and k < n + 10_000:
        acc.append(term)
        k += 1
        term *= x / k
    return math.fsum(acc)


class AnalyticFn(ABC):
    """Base class of the function algebra."""

    analytic = True

    def __call__(self, x):
        return self.derivative_at(0, x)

    @abstractmethod
    def derivative_at(self, k: int, x):
        """Exact k-th derivative at ``x`` (float or array)."""

    def declared_radius(self, center: float) -> float | None:
        """Radius of convergence of the Taylor series about ``center``, if known."""
        return math.inf

    def breakpoints(self) -> tuple[float, ...]:
        """Points where the function or its derivatives jump."""
        return ()

    @abstractmethod
    def taylor_tail(self, center: float, h: float, n: int) -> float:
        """Upper bound on sum_{k>n} |f^(k)(center)| h^k / k!."""

    def __add__(self, other):
        if isinstance(other, (int, float)):
            return Combination.of(self, Polynomial((float(other),)))
        if not isinstance(other, AnalyticFn):
            return NotImplemented
        return Combination.of(self, other)

    def __radd__(self, other):
        return self.__add__(other)

    def __mul__(self, scale):
        if not isinstance(scale, (int, float)):
            return NotImplemented
        return Combination(((float(scale), self),))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)


@dataclass(frozen=True)
class Polynomial(AnalyticFn):
    """sum_j coefficients[j] x^j (coefficients low to high)."""

    coefficients: tuple[float, ...]

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients) or (0.0,)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        d = len(self.coefficients) - 1
        while d > 0 and self.coefficients[d] == 0.0:
            d -= 1
        return d

    def derivative_at(self, k, x):
        if k < 0:
            raise DomainError("derivative order must be non-negative")
        c = self.coefficients
        if k >= len(c):
            return _finish(x, 0.0 * np.asarray(x, dtype=float))
        acc = 0.0 * np.asarray(x, dtype=float) if not _is_scalar(x) else 0.0
        for j in range(len(c) - 1, k - 1, -1):
            acc = acc * x + c[j] * _falling(j, k)
        return _finish(x, acc)

    def shifted_coefficients(self, center: float) -> list[float]:
        return [self.derivative_at(k, center) / math.factorial(k) for k in range(len(self.coefficients))]

    def taylor_tail(self, center, h, n):
        cs = self.shifted_coefficients(center)
        return math.fsum(abs(cs[k]) * h**k for k in range(n + 1, len(cs)))


@dataclass(frozen=True)
class Exponential(AnalyticFn):
    """exp(rate * x)."""

    rate: float = 1.0

    def derivative_at(self, k, x):
        if k < 0:
            raise DomainError("derivative order must be non-negative")
        xp = _ns(x)
        return _finish(x, self.rate**k * xp.exp(self.rate * x))

    def taylor_tail(self, center, h, n):
        return math.exp(self.rate * center) * _exp_tail(abs(self.rate) * h, n)


@dataclass(frozen=True)
class Sinusoid(AnalyticFn):
    """sin(rate * x + phase)."""

    rate: float = 1.0
    phase: float = 0.0

    @property
    def period(self) -> float:
        if self.rate == 0.0:
            return math.inf
        return 2.0 * math.pi / abs(self.rate)

    def derivative_at(self, k, x):
        if k < 0:
            raise DomainError("derivative order must be non-negative")
        xp = _ns(x)
        theta = self.rate * x + self.phase
        # apply the k quarter-turns through the derivative cycle, not through the argument
        q = k % 4
        base = xp.sin(theta) if q % 2 == 0 else xp.cos(theta)
        sign = 1.0 if q < 2 else -1.0
        return _finish(x, sign * self.rate**k * base)

    def taylor_tail(self, center, h, n):
        return _exp_tail(abs(self.rate) * h, n)


@dataclass(frozen=True)
class Power(AnalyticFn):
    """(x - center)^exponent.

    For a non-integer exponent the function lives on ``x > center`` and its
    Taylor series about ``x0`` has radius ``x0 - center``.  Pass
    ``declare_radius=False`` to make :func:`convergence_radius` fall back on
    the ratio test.
    """

    exponent: float
    center: float = 0.0
    declare_radius: bool = True

    @property
    def _integral_exponent(self) -> bool:
        return self.exponent == math.floor(self.exponent)

    def _check(self, x):
        d = np.asarray(x, dtype=float) - self.center
        if self._integral_exponent:
            if self.exponent < 0 and np.any(d == 0.0):
                raise DomainError("negative integer power evaluated at its pole")
        elif np.any(d <= 0.0):
            raise DomainError(f"power with exponent {self.exponent} needs x > {self.center}")

    def derivative_at(self, k, x):
        if k < 0:
            raise DomainError("derivative order must be non-negative")
        self._check(x)
        coeff = _falling(self.exponent, k)
        if coeff == 0.0:
            return _finish(x, 0.0 * np.asarray(x, dtype=float))
        return _finish(x, coeff * (x - self.center) ** (self.exponent - k))

    def declared_radius(self, center):
        if self._integral_exponent and self.exponent >= 0:
            return math.inf
        if not self.declare_radius:
            return None
        return abs(center - self.center)

    def breakpoints(self):
        return (self.center,)

    def taylor_tail(self, center, h, n):
        if self._integral_exponent and self.exponent >= 0:
            return Polynomial(self._as_poly()).taylor_tail(center, h, n)
        d = center - self.center
        if not h < d:
            return math.inf
        q = h / d
        term = abs(_falling(self.exponent, n + 1) / math.factorial(n + 1)) * d**self.exponent * q ** (n + 1)
        acc = []
        k = n + 1
        while k < n + 100_000:
            acc.append(term)
            ratio = abs((self.exponent - k) / (k + 1)) * q
            term *= ratio
            k += 1
            if term < 1e-17 * acc[0] and ratio < 1.0:
                break
        return math.fsum(acc)

    def _as_poly(self) -> tuple[float, ...]:
        m = int(self.exponent)
        return tuple(math.comb(m, j) * (-self.center) ** (m - j) for j in range(m + 1))


@dataclass(frozen=True)
class Heaviside(AnalyticFn):
    """Unit step at ``step``: 1 for x >= step, else 0.  Not analytic."""

    step: float = 0.0
    analytic = False

    def __call__(self, x):
        if _is_scalar(x):
            return 1.0 if x >= self.step else 0.0
        return np.where(np.asarray(x) >= self.step, 1.0, 0.0)

    def derivative_at(self, k, x):
        if k == 0:
            return self(x)
        raise NonAnalyticError("the unit step has no classical derivatives")

    def declared_radius(self, center):
        raise NonAnalyticError("the unit step has no Taylor series")

    def breakpoints(self):
        return (self.step,)

    def taylor_tail(self, center, h, n):
        raise NonAnalyticError("the unit step has no Taylor series")


@dataclass(frozen=True)
class Affine(AnalyticFn):
    """x -> inner(lam * x + shift)."""

    inner: AnalyticFn
    lam: float
    shift: float = 0.0

    def __post_init__(self):
        if self.lam == 0.0:
            raise DomainError("affine scale must be non-zero")

    @property
    def analytic(self):
        return self.inner.analytic

    def _map(self, x):
        return self.lam * x + self.shift

    def __call__(self, x):
        return self.inner(self._map(x))

    def derivative_at(self, k, x):
        return self.lam**k * self.inner.derivative_at(k, self._map(x))

    def declared_radius(self, center):
        r = self.inner.declared_radius(self._map(center))
        return None if r is None else r / abs(self.lam)

    def breakpoints(self):
        return tuple((b - self.shift) / self.lam for b in self.inner.breakpoints())

    def taylor_tail(self, center, h, n):
        return self.inner.taylor_tail(self._map(center), abs(self.lam) * h, n)


@dataclass(frozen=True)
class Combination(AnalyticFn):
    """sum_i scale_i * f_i."""

    terms: tuple[tuple[float, AnalyticFn], ...]

    @classmethod
    def of(cls, *fns: AnalyticFn) -> "Combination":
        flat: list[tuple[float, AnalyticFn]] = []
        for fn in fns:
            if isinstance(fn, Combination):
                flat.extend(fn.terms)
            else:
                flat.append((1.0, fn))
        return cls(tuple(flat))

    def __mul__(self, scale):
        if not isinstance(scale, (int, float)):
            return NotImplemented
        return Combination(tuple((s * scale, fn) for s, fn in self.terms))

    __rmul__ = __mul__

    @property
    def analytic(self):
        return all(fn.analytic for _, fn in self.terms)

    def __call__(self, x):
        return self._sum(lambda fn: fn(x), x)

    def derivative_at(self, k, x):
        return self._sum(lambda fn: fn.derivative_at(k, x), x)

    def _sum(self, each, x):
        parts = [s * each(fn) for s, fn in self.terms]
        if _is_scalar(x):
            return math.fsum(parts)
        return np.sum(parts, axis=0)

    def declared_radius(self, center):
        radii = [fn.declared_radius(center) for _, fn in self.terms]
        if any(r is None for r in radii):
            return None
        return min(radii, default=math.inf)

    def breakpoints(self):
        return tuple(sorted({b for _, fn in self.terms for b in fn.breakpoints()}))

    def taylor_tail(self, center, h, n):
        return math.fsum(abs(s) * fn.taylor_tail(center, h, n) for s, fn in self.terms)


def constant(value: float) -> Polynomial:
    return Polynomial((float(value),))


@dataclass(frozen=True)
class TaylorHead:
    """Taylor coefficients c_k = f^(k)(center)/k! for k = 0..N."""

    center: float
    coefficients: tuple[float, ...]

    @property
    def length(self) -> int:
        return len(self.coefficients)

    def __call__(self, x: float) -> float:
        h = x - self.center
        return math.fsum(c * h**k for k, c in enumerate(self.coefficients))


def derivative_at(f: AnalyticFn, k: int, x):
    return f.derivative_at(k, x)


def taylor_coefficients(f: AnalyticFn, center: float, N: int) -> TaylorHead:
    if N < 0:
        raise DomainError("N must be non-negative")
    coeffs = tuple(f.derivative_at(k, center) / math.factorial(k) for k in range(N + 1))
    return TaylorHead(float(center), coeffs)


def taylor_tail(f: AnalyticFn, center: float, h: float, N: int) -> float:
    """Bound on the Taylor remainder sum_{k>N} |f^(k)(center)| h^k / k!."""
    return f.taylor_tail(center, abs(h), N)


def ratio_test_radius(coefficients: Sequence[float], kmin: int = 20, kmax: int = 60) -> float:
    """Estimate lim |c_k / c_{k+1}| from the coefficients with indices kmin..kmax.

    Zero coefficients are skipped; consecutive non-zero entries ``c_i, c_j``
    contribute the ratio ``|c_i / c_j|^(1/(j-i))``.  The limit is taken by a
    least-squares fit of the ratios against 1/k.  Raises
    :class:`EstimationError` if the raw ratios spread by more than 10%.
    """
    idx = [k for k in range(kmin, min(kmax, len(coefficients) - 1) + 1) if coefficients[k] != 0.0]
    ks, ratios = [], []
    for i, j in zip(idx, idx[1:]):
        ks.append(0.5 * (i + j))
        ratios.append(abs(coefficients[i] / coefficients[j]) ** (1.0 / (j - i)))
    if len(ratios) < 3:
        raise EstimationError("too few non-zero coefficients for a ratio test")
    lo, hi = min(ratios), max(ratios)
    if not math.isfinite(hi) or (hi - lo) > 0.1 * hi:
        raise EstimationError(f"ratio test did not stabilize: ratios span [{lo:.6g}, {hi:.6g}]")
    inv = np.array([1.0 / k for k in ks])
    slope, intercept = np.polyfit(inv, np.array(ratios), 1)
    est = float(intercept)
    if not est > 0.0:
        est = ratios[-1]
    return est


def estimate_radius(f: AnalyticFn, center: float, kmin: int = 20, kmax: int = 60) -> float:
    coeffs = []
    for k in range(kmax + 1):
        # k! overflows nothing up to k = 170; larger windows use lgamma
        d = f.derivative_at(k, center)
        coeffs.append(d / math.factorial(k) if k <= 170 else d * math.exp(-math.lgamma(k + 1)))
    return ratio_test_radius(coeffs, kmin, kmax)


def convergence_radius(f: AnalyticFn, center: float) -> float:
    r = f.declared_radius(center)
    if r is not None:
        return r
    return estimate_radius(f, center)
