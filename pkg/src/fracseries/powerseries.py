"""Finite sums of powers of (t - a), closed under the three operators.

Operators act term by term through

    RL integral of order b:     (t-a)^e -> Gamma(e+1)/Gamma(e+b+1) (t-a)^(e+b)
    RL derivative of order b:   (t-a)^e -> Gamma(e+1)/Gamma(e-b+1) (t-a)^(e-b)
    Caputo derivative order b:  the same as RL, except that integer powers
                                e = 0..ceil(b)-1 are annihilated

which is how compositions of the series representations are checked
without any quadrature.  A vanishing reciprocal gamma removes the term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .funcmodel import AnalyticFn
from .operators import OperatorKind, ceil_order
from .specialfn import gamma, reciprocal_gamma

__all__ = ["FracPowerSeries"]

_SNAP = 1e-12


def _snap(e: float) -> float:
    r = round(e)
    return float(r) if abs(e - r) < _SNAP else e


def _is_int(e: float) -> bool:
    return e == math.floor(e)


@dataclass(frozen=True)
class FracPowerSeries:
    """sum_i coef_i (t - a)^exponent_i."""

    a: float
    terms: tuple[tuple[float, float], ...]

    @classmethod
    def from_taylor(cls, f: AnalyticFn, a: float, N: int) -> "FracPowerSeries":
        terms = []
        for k in range(N + 1):
            c = f.derivative_at(k, a) / math.factorial(k)
            if c != 0.0:
                terms.append((c, float(k)))
        return cls(float(a), tuple(terms))

    def __call__(self, t: float) -> float:
        h = t - self.a
        if not h > 0.0:
            raise DomainError("power series is evaluated for t > a only")
        return math.fsum(c * h**e for c, e in self.terms)

    def _map(self, shift: float, annihilate_below: int = 0) -> "FracPowerSeries":
        out = []
        for c, e in self.terms:
            if _is_int(e) and 0 <= e < annihilate_below:
                continue
            new_e = _snap(e + shift)
            rg = reciprocal_gamma(new_e + 1.0)
            if rg == 0.0:
                continue
            g = gamma(e + 1.0)
            if g.is_pole:
                raise DomainError(f"power (t-a)^{e} has no series image")
            out.append((c * g.value * rg, new_e))
        return FracPowerSeries(self.a, tuple(out))

    def rl_integral(self, order: float) -> "FracPowerSeries":
        return self._map(order)

    def rl_derivative(self, order: float) -> "FracPowerSeries":
        # a negative order means the RL integral of the opposite order
        return self._map(-order)

    def caputo(self, order: float) -> "FracPowerSeries":
        return self._map(-order, ceil_order(order))

    def derivative(self, m: int) -> "FracPowerSeries":
        """Classical m-th derivative."""
        return self._map(-float(m))

    def apply(self, kind: OperatorKind, order: float) -> "FracPowerSeries":
        if kind is OperatorKind.RL_INTEGRAL:
            return self.rl_integral(order)
        if kind is OperatorKind.RL_DERIVATIVE:
            return self.rl_derivative(order)
        return self.caputo(order)
