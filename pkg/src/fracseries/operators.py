"""Operator descriptions shared by the series evaluators and the quadrature oracle."""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import DomainError, SegmentLookupError

__all__ = [
    "OperatorKind",
    "Representation",
    "Expansion",
    "PiecewiseOrder",
    "Order",
    "OperatorSpec",
    "Evaluation",
    "ceil_order",
    "is_integer_order",
]


class OperatorKind(Enum):
    RL_INTEGRAL = "rl-int"
    RL_DERIVATIVE = "rl-deriv"
    CAPUTO_DERIVATIVE = "caputo"

    @property
    def is_derivative(self) -> bool:
        return self is not OperatorKind.RL_INTEGRAL


class Representation(Enum):
    INITIAL_EXPANSION = "INITIAL_EXPANSION"
    CURRENT_EXPANSION = "CURRENT_EXPANSION"
    TAYLOR_FORMULA = "TAYLOR_FORMULA"
    CLOSED_FORM = "CLOSED_FORM"
    QUADRATURE = "QUADRATURE"


class Expansion(Enum):
    INITIAL = "initial"
    CURRENT = "current"


def is_integer_order(alpha: float) -> bool:
    return alpha == math.floor(alpha)


def ceil_order(alpha: float) -> int:
    """n with n - 1 < alpha <= n."""
    return math.ceil(alpha)


@dataclass(frozen=True)
class PiecewiseOrder:
    """Order alpha_i on [t_{i-1}, t_i), with t_0 the initial instant.

    ``segment_ends`` are the right ends t_1 < t_2 < ...; the last one may be
    ``math.inf``.
    """

    segment_ends: tuple[float, ...]
    orders: tuple[float, ...]

    def __post_init__(self):
        ends = tuple(float(t) for t in self.segment_ends)
        orders = tuple(float(al) for al in self.orders)
        object.__setattr__(self, "segment_ends", ends)
        object.__setattr__(self, "orders", orders)
        if not ends or len(ends) != len(orders):
            raise DomainError("piecewise order needs one order per segment")
        if any(b <= a for a, b in zip(ends, ends[1:])):
            raise DomainError("segment ends must be strictly increasing")
        if any(not al > 0.0 for al in orders):
            raise DomainError("segment orders must be positive")

    @classmethod
    def constant(cls, alpha: float) -> "PiecewiseOrder":
        return cls((math.inf,), (alpha,))

    def segment_index(self, t: float, a: float) -> int:
        if t < a:
            raise SegmentLookupError(f"t={t!r} precedes the initial instant {a!r}")
        if self.segment_ends[0] <= a:
            raise SegmentLookupError("first segment ends before the initial instant")
        i = bisect.bisect_right(self.segment_ends, t)
        if i >= len(self.orders):
            raise SegmentLookupError(f"t={t!r} lies beyond the last segment")
        return i

    def at(self, t: float, a: float) -> float:
        return self.orders[self.segment_index(t, a)]

    def ceilings(self) -> tuple[int, ...]:
        return tuple(ceil_order(al) for al in self.orders)


Order = Union[float, PiecewiseOrder]


@dataclass(frozen=True)
class OperatorSpec:
    """Which operator, its order and its initial instant."""

    kind: OperatorKind
    order: Order
    a: float = 0.0

    def __post_init__(self):
        if isinstance(self.order, PiecewiseOrder):
            return
        object.__setattr__(self, "order", float(self.order))
        if not self.order > 0.0:
            raise DomainError(
                f"order must be positive (got {self.order!r}); use OperatorSpec.create for sign normalization"
            )

    @classmethod
    def create(cls, kind: OperatorKind, order: float, a: float = 0.0) -> "OperatorSpec":
        """Build a spec, rewriting a negative RL order as the opposite operator.

        An RL derivative of order -alpha is the RL integral of order alpha and
        vice versa.  Caputo derivatives have no such rewriting.
        """
        order = float(order)
        if order < 0.0:
            if kind is OperatorKind.RL_DERIVATIVE:
                return cls(OperatorKind.RL_INTEGRAL, -order, a)
            if kind is OperatorKind.RL_INTEGRAL:
                return cls(OperatorKind.RL_DERIVATIVE, -order, a)
            raise DomainError("a Caputo derivative of negative order is undefined")
        return cls(kind, order, a)

    @property
    def is_constant(self) -> bool:
        return not isinstance(self.order, PiecewiseOrder)

    @property
    def alpha(self) -> float:
        if not self.is_constant:
            raise DomainError("operator has a piecewise order; use order_at(t)")
        return self.order

    @property
    def n(self) -> int:
        return ceil_order(self.alpha)

    def order_at(self, t: float) -> float:
        if self.is_constant:
            return self.order
        return self.order.at(t, self.a)

    def at_order(self, alpha: float) -> "OperatorSpec":
        return OperatorSpec(self.kind, alpha, self.a)


@dataclass(frozen=True)
class Evaluation:
    """An operator value and where it came from."""

    value: float
    representation: Representation
    N: int | None = None
    bound: float | None = None

    def __post_init__(self):
        if self.bound is not None and not self.bound >= 0.0:
            raise DomainError("truncation bound must be non-negative")

    def __float__(self) -> float:
        return self.value
