r"""Scalar special functions used by every series term.

Gamma is computed with a Lanczos approximation (g = 7, nine coefficients)
and the reflection formula below 1/2.  Poles are reported through
:class:`SpecialValue` rather than as IEEE infinities so that callers can
drop the corresponding series terms deterministically.

The two series functions share one summation contract: terms are
accumulated with :func:`math.fsum` and the loop stops once three
consecutive terms satisfy :math:`|t_k| \le 10^{-15} |S_k|`, with a hard
cap of :data:`MAX_TERMS` terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import (
    ConvergenceError,
    DomainError,
    GammaOverflowError,
    PoleError,
)

__all__ = [
    "SpecialValue",
    "gamma",
    "reciprocal_gamma",
    "log_abs_gamma",
    "digamma",
    "phi_factor",
    "gen_binomial",
    "mittag_leffler",
    "aux_incomplete_gamma",
    "sinpi",
    "cospi",
    "is_nonpositive_integer",
    "sum_series",
    "MAX_TERMS",
    "REL_TOL",
]

GAMMA_MAX = 171.62437695630272
MAX_TERMS = 10_000
REL_TOL = 1e-15
STOP_AFTER = 3

_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class SpecialValue:
    """A real function value, or a pole marker.

    ``value`` is ``math.inf`` when ``is_pole`` is set; otherwise it is finite.
    """

    value: float
    is_pole: bool = False

    def __float__(self) -> float:
        return self.value


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def sinpi(x: float) -> float:
    """sin(pi x), exactly zero at integers."""
    if x == math.floor(x):
        return 0.0
    r = math.fmod(x, 2.0)
    if r < 0.0:
        r += 2.0
    if r <= 0.25:
        return math.sin(math.pi * r)
    if r <= 0.75:
        return math.cos(math.pi * (r - 0.5))
    if r <= 1.25:
        return -math.sin(math.pi * (r - 1.0))
    if r <= 1.75:
        return -math.cos(math.pi * (r - 1.5))
    return math.sin(math.pi * (r - 2.0))


def cospi(x: float) -> float:
    """cos(pi x), exactly zero at half-integers."""
    return sinpi(x + 0.5)


def _lanczos_sum(z: float) -> float:
    # z is the shifted argument x - 1 for x >= 0.5
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    return acc


def _gamma_positive(x: float) -> float:
    z = x - 1.0
    base = z + _LANCZOS_G + 0.5
    half_pow = base ** ((z + 0.5) / 2.0)
    return _SQRT_2PI * half_pow * (half_pow * math.exp(-base)) * _lanczos_sum(z)


def _log_gamma_positive(x: float) -> float:
    z = x - 1.0
    base = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * math.log(base) - base + math.log(_lanczos_sum(z))


def gamma(x: float) -> SpecialValue:
    """Gamma function with pole flagging.

    Raises :class:`GammaOverflowError` for ``x`` above about 171.62.
    """
    x = float(x)
    if math.isnan(x):
        raise DomainError("gamma of NaN")
    if is_nonpositive_integer(x):
        return SpecialValue(math.inf, True)
    if x > GAMMA_MAX:
        raise GammaOverflowError(f"gamma({x!r}) overflows a double")
    if x == math.floor(x) and x <= 23.0:
        return SpecialValue(float(math.factorial(int(x) - 1)))
    if x >= 0.5:
        return SpecialValue(_gamma_positive(x))
    s = sinpi(x)
    if 1.0 - x > GAMMA_MAX:
        lg = math.log(math.pi / abs(s)) - _log_gamma_positive(1.0 - x)
        sign = 1.0 if s > 0.0 else -1.0
        return SpecialValue(sign * math.exp(lg))
    return SpecialValue(math.pi / (s * _gamma_positive(1.0 - x)))


def log_abs_gamma(x: float) -> tuple[float, float]:
    """Return ``(ln|Gamma(x)|, sign Gamma(x))``; raises at poles."""
    x = float(x)
    if is_nonpositive_integer(x):
        raise PoleError(f"gamma has a pole at {x!r}")
    if x >= 0.5:
        return _log_gamma_positive(x), 1.0
    s = sinpi(x)
    lg = math.log(math.pi / abs(s)) - _log_gamma_positive(1.0 - x)
    return lg, (1.0 if s > 0.0 else -1.0)


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x); exactly zero at the poles 0, -1, -2, ..."""
    x = float(x)
    if is_nonpositive_integer(x):
        return 0.0
    if x > GAMMA_MAX:
        lg, _ = log_abs_gamma(x)
        return math.exp(-lg)
    if x == math.floor(x) and x <= 23.0:
        return 1.0 / math.factorial(int(x) - 1)
    if x >= 0.5:
        return 1.0 / _gamma_positive(x)
    # 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi
    if 1.0 - x > GAMMA_MAX:
        lg, sign = log_abs_gamma(x)
        return sign * math.exp(-lg)
    return sinpi(x) * _gamma_positive(1.0 - x) / math.pi


# Bernoulli-number coefficients B_2k / (2k) of the digamma asymptotic series
_DIGAMMA_ASYMPTOTIC = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def _digamma_positive(x: float) -> float:
    shifts = []
    while x < 10.0:
        shifts.append(-1.0 / x)
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    p = inv2
    for c in _DIGAMMA_ASYMPTOTIC:
        tail += c * p
        p *= inv2
    return math.fsum(shifts + [math.log(x), -0.5 / x, -tail])


def digamma(x: float) -> SpecialValue:
    """psi(x) = Gamma'(x)/Gamma(x), with poles flagged."""
    x = float(x)
    if is_nonpositive_integer(x):
        return SpecialValue(math.inf, True)
    if x > 0.0:
        return SpecialValue(_digamma_positive(x))
    # reflection: psi(x) = psi(1 - x) - pi cot(pi x)
    return SpecialValue(_digamma_positive(1.0 - x) - math.pi * cospi(x) / sinpi(x))


def phi_factor(k: int, alpha: float, t: float, a: float) -> float:
    """psi(k - alpha) - ln(t - a)."""
    if not t > a:
        raise DomainError(f"phi_factor needs t > a, got t={t!r}, a={a!r}")
    psi = digamma(k - alpha)
    if psi.is_pole:
        raise PoleError(f"digamma pole at k - alpha = {k - alpha!r}")
    return psi.value - math.log(t - a)


def gen_binomial(p: float, q: float) -> float:
    """Generalized binomial coefficient Gamma(p+1) / (Gamma(q+1) Gamma(p-q+1)).

    Integer ``q`` uses the falling factorial, which is the limiting value
    when ``p`` is a negative integer.  Negative integer ``q`` gives 0.
    """
    p = float(p)
    q = float(q)
    if q == math.floor(q):
        if q < 0.0:
            return 0.0
        acc = 1.0
        for j in range(int(q)):
            acc *= (p - j) / (j + 1)
        return acc
    rq = reciprocal_gamma(q + 1.0)
    rpq = reciprocal_gamma(p - q + 1.0)
    if is_nonpositive_integer(p + 1.0):
        # q is not an integer here, so Gamma(p-q+1) is finite and the quotient is infinite
        raise PoleError(f"binomial({p!r}, {q!r}) is infinite")
    return gamma(p + 1.0).value * rq * rpq


def sum_series(term: Callable[[int], float], first_active: int = 0) -> float:
    """Sum ``term(0) + term(1) + ...`` under the shared stopping contract.

    The consecutive-small-term count only starts at ``first_active`` so that
    leading terms that vanish at gamma poles do not end the loop early.
    """
    terms: list[float] = []
    running = 0.0
    quiet = 0
    for k in range(MAX_TERMS):
        tk = term(k)
        terms.append(tk)
        running += tk
        if k < first_active:
            continue
        if abs(tk) <= REL_TOL * abs(running):
            quiet += 1
            if quiet >= STOP_AFTER:
                total = math.fsum(terms)
                if math.isinf(total):
                    raise GammaOverflowError("series sum overflows a double")
                return total
        else:
            quiet = 0
    raise ConvergenceError(f"series did not converge within {MAX_TERMS} terms")


def _power_over_gamma(logz: float, sign_z: float, k: int, arg: float, pre_log: float = 0.0) -> float:
    """sign * exp(k*logz + pre_log - ln|Gamma(arg)|), zero at gamma poles."""
    if is_nonpositive_integer(arg):
        return 0.0
    lg, sg = log_abs_gamma(arg)
    e = k * logz + pre_log - lg
    if e > 709.0:
        raise GammaOverflowError("series term overflows a double")
    s = sg * (sign_z if k % 2 else 1.0)
    return s * math.exp(e)


def mittag_leffler(x: float, y: float, z: float) -> float:
    """Two-parameter Mittag-Leffler function E_{x,y}(z) = sum z^k / Gamma(kx + y)."""
    if not x > 0.0:
        raise DomainError(f"mittag_leffler needs x > 0, got {x!r}")
    if z == 0.0:
        return reciprocal_gamma(y)
    logz = math.log(abs(z))
    sign_z = 1.0 if z > 0.0 else -1.0
    direct_limit = 160.0

    def term(k: int) -> float:
        arg = k * x + y
        if arg < direct_limit and k * logz < 700.0:
            return z**k * reciprocal_gamma(arg)
        return _power_over_gamma(logz, sign_z, k, arg)

    first = max(0, math.ceil(-y / x) + 1)
    return sum_series(term, first)


def aux_incomplete_gamma(c: float, x: float) -> float:
    """g*(c, x) = x^c e^{-x} sum_k x^k / Gamma(k + c + 1)."""
    if x < 0.0 or math.isnan(x):
        raise DomainError(f"aux_incomplete_gamma needs x >= 0, got {x!r}")
    if x == 0.0:
        if c > 0.0:
            return 0.0
        if c == 0.0:
            return 1.0
        if c == math.floor(c):
            # the first surviving term x^{-c}/Gamma(1) cancels the prefactor
            return 1.0
        raise DomainError(f"g*({c!r}, 0) is infinite")
    logx = math.log(x)

    def term(k: int) -> float:
        arg = k + c + 1.0
        if is_nonpositive_integer(arg):
            return 0.0
        # fold the x^c e^{-x} prefactor into the log so no intermediate overflows
        return _power_over_gamma(logx, 1.0, k, arg, c * logx - x)

    first = max(0, math.ceil(-c - 1.0) + 1)
    return sum_series(term, first)
