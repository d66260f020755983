import math

import pytest

from fracseries.errors import ParseError
from fracseries.funcmodel import Combination, Exponential, Heaviside, Polynomial, Power, Sinusoid
from fracseries.grammar import parse_function


@pytest.mark.parametrize(
    "text,expected",
    [
        ("exp:lambda=2", Exponential(2.0)),
        ("exp", Exponential(1.0)),
        ("sin:lambda=1,phase=0", Sinusoid(1.0, 0.0)),
        ("poly:1,0,3", Polynomial((1.0, 0.0, 3.0))),
        ("power:nu=0.5,center=0", Power(0.5, 0.0)),
        ("heaviside:step=0.5", Heaviside(0.5)),
        ("  exp : lambda = -1.5e-1 ", Exponential(-0.15)),
    ],
)
def test_single_families(text, expected):
    assert parse_function(text) == expected


def test_scaled_sum():
    f = parse_function("2*exp:lambda=1 + poly:0,1")
    assert isinstance(f, Combination)
    assert f(0.5) == pytest.approx(2.0 * math.exp(0.5) + 0.5)


def test_subtraction_and_bare_sign():
    f = parse_function("-sin - 0.5*poly:1")
    assert f(1.0) == pytest.approx(-math.sin(1.0) - 0.5)


@pytest.mark.parametrize(
    "text,position",
    [
        ("", 0),
        ("cosh:lambda=1", 0),
        ("exp:lam=2", 4),
        ("exp:lambda=", 11),
        ("poly", 0),
        ("power:center=1", 0),
        ("exp:lambda=1 $", 13),
        ("exp:lambda=1,lambda=2", 13),
    ],
)
def test_errors_report_position(text, position):
    with pytest.raises(ParseError) as info:
        parse_function(text)
    assert info.value.position == position
    assert f"at position {position}" in str(info.value)
