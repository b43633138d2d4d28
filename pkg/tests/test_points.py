from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpwalk.exactnum import QuadExt, RatFunc, T, as_quad
from qpwalk.points import ProjPoint, format_coord, format_value, on_curve, parse_point, parse_value
from qpwalk.walkcat import lookup

coef = st.fractions(min_value=-6, max_value=6, max_denominator=5)


@st.composite
def ratfuncs(draw):
    num = [draw(coef) for _ in range(draw(st.integers(1, 3)))]
    den = [draw(coef) for _ in range(draw(st.integers(1, 3)))]
    if not any(den):
        den = [Fraction(1)]
    r = RatFunc(0)
    for k, c in enumerate(num):
        r = r + c * T**k
    d = RatFunc(0)
    for k, c in enumerate(den):
        d = d + c * T**k
    return r / d


@st.composite
def values(draw):
    a, b = draw(ratfuncs()), draw(ratfuncs())
    rad = draw(st.sampled_from([RatFunc(-1), RatFunc(-3), RatFunc(2), T, T * T + 4 * T]))
    return QuadExt(a, b, rad)


@given(values())
@settings(max_examples=150, deadline=None)
def test_value_format_round_trip(v):
    assert parse_value(format_value(v)) == v


@given(st.one_of(st.none(), values()), st.one_of(st.none(), values()))
@settings(max_examples=80, deadline=None)
def test_point_format_round_trip(x, y):
    P = ProjPoint(x, y)
    assert parse_point(str(P)) == P


@pytest.mark.parametrize("value, text", [
    (as_quad(T / (2 * T + 1)), "[t:2t+1]"),
    (as_quad(-T / (T + 1)), "[-t:t+1]"),
    (None, "[1:0]"),
    (as_quad(0), "[0:1]"),
    (QuadExt(0, 1, RatFunc(-1)), "[√-1:1]"),
    (QuadExt(T, -T, RatFunc(-1)), "[t-t√-1:1]"),
])
def test_coordinate_display(value, text):
    assert format_coord(value) == text


def test_projective_scaling_is_canonical():
    P = ProjPoint.from_proj(2 * T, 4 * T + 2, 3, 0)
    assert str(P) == "([t:2t+1],[1:0])"


def test_zero_pair_rejected():
    with pytest.raises(ValueError):
        ProjPoint.from_proj(0, 0, 1, 1)


@pytest.mark.parametrize("text", ["[1:0]", "([1:0])", "([1:0],[1])", "([1:0],[t+:1])"])
def test_malformed_points_rejected(text):
    with pytest.raises(ValueError):
        parse_point(text)


def test_on_curve():
    D = lookup("IIC.5")
    assert on_curve(D, parse_point("([-1:1],[t:2t+1])"))
    assert not on_curve(D, parse_point("([-1:1],[t:2t+3])"))
