"""Parser for the small function-expression language used by the CLI.

Examples::

    exp:lambda=2
    sin:lambda=1,phase=0
    poly:1,0,3                 # 1 + 3 x^2
    power:nu=0.5,center=0
    heaviside:step=0.5
    2*exp:lambda=1 + poly:0,1  # scaled sums; '-' also separates terms

Whitespace is ignored.  Errors raise :class:`ParseError` with the offset of
the offending character in the original string.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .funcmodel import (
    AnalyticFn,
    Combination,
    Exponential,
    Heaviside,
    Polynomial,
    Power,
    Sinusoid,
)

__all__ = ["parse_function"]

_NUMBER = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?")
_NAME = re.compile(r"[A-Za-z_]+")

# family -> (constructor keyword for each accepted parameter, defaults)
_FAMILIES = {
    "exp": ({"lambda": "rate", "rate": "rate"}, {"rate": 1.0}),
    "sin": ({"lambda": "rate", "rate": "rate", "phase": "phase"}, {"rate": 1.0, "phase": 0.0}),
    "power": ({"nu": "exponent", "center": "center"}, {"center": 0.0}),
    "heaviside": ({"step": "step"}, {"step": 0.0}),
}
_BUILDERS = {"exp": Exponential, "sin": Sinusoid, "power": Power, "heaviside": Heaviside}


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int | None = None):
        raise ParseError(message, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            found = self.peek() or "end of input"
            self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def number(self) -> float:
        self.skip()
        m = _NUMBER.match(self.text, self.pos)
        if not m:
            self.error("expected a number")
        self.pos = m.end()
        return float(m.group())

    def name(self) -> str:
        self.skip()
        m = _NAME.match(self.text, self.pos)
        if not m:
            self.error("expected a function name")
        self.pos = m.end()
        return m.group().lower()

    def expression(self) -> AnalyticFn:
        terms = [self.term(1.0)]
        while True:
            ch = self.peek()
            if ch == "+":
                self.pos += 1
                terms.append(self.term(1.0))
            elif ch == "-":
                self.pos += 1
                terms.append(self.term(-1.0))
            elif ch == "":
                break
            else:
                self.error(f"unexpected character {ch!r}")
        if len(terms) == 1 and terms[0][0] == 1.0:
            return terms[0][1]
        return Combination(tuple(terms))

    def term(self, sign: float) -> tuple[float, AnalyticFn]:
        scale = sign
        ch = self.peek()
        if ch in ("+", "-") and not _NUMBER.match(self.text, self.pos):
            # bare sign in front of a function name
            self.pos += 1
            scale = -scale if ch == "-" else scale
            ch = self.peek()
        if ch and (ch.isdigit() or ch in ".+-"):
            scale *= self.number()
            self.expect("*")
        return scale, self.atom()

    def atom(self) -> AnalyticFn:
        self.skip()
        start = self.pos
        family = self.name()
        has_params = self.peek() == ":"
        if has_params:
            self.pos += 1
        if family == "poly":
            if not has_params:
                self.error("poly needs coefficients", start)
            coeffs = [self.number()]
            while self.peek() == ",":
                self.pos += 1
                coeffs.append(self.number())
            return Polynomial(tuple(coeffs))
        if family not in _FAMILIES:
            self.error(f"unknown function family {family!r}", start)
        keys, defaults = _FAMILIES[family]
        kwargs = dict(defaults)
        seen = set()
        if has_params:
            while True:
                key_pos = self.pos
                key = self.name()
                if key not in keys:
                    self.error(f"unknown parameter {key!r} for {family}", key_pos)
                if keys[key] in seen:
                    self.error(f"duplicate parameter {key!r}", key_pos)
                seen.add(keys[key])
                self.expect("=")
                kwargs[keys[key]] = self.number()
                if self.peek() != ",":
                    break
                self.pos += 1
        if family == "power" and "exponent" not in kwargs:
            self.error("power needs nu=<exponent>", start)
        return _BUILDERS[family](**kwargs)


def parse_function(text: str) -> AnalyticFn:
    """Parse a function expression into an :class:`AnalyticFn`."""
    parser = _Parser(text)
    if not parser.peek():
        parser.error("empty function expression")
    return parser.expression()
