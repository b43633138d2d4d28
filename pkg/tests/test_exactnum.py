from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpwalk.exactnum import (
    BiRat,
    Poly,
    QuadExt,
    RatFunc,
    T,
    as_quad,
    discriminant,
    quad_sqrt,
    rational_roots,
    resultant,
    squarefree_constant,
)

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def ratfuncs(draw, nonzero=False):
    num = draw(st.lists(small, min_size=1, max_size=3))
    den = draw(st.lists(small, min_size=1, max_size=3).filter(lambda c: any(c)))
    r = RatFunc(Poly(num), Poly(den))
    if nonzero and r.is_zero():
        r = RatFunc(1)
    return r


def test_canonical_form_is_structural():
    a = (T * T - 1) / (T - 1)
    assert a == T + 1
    assert hash(a) == hash(T + 1)
    assert (T / (2 * T)) == RatFunc(Fraction(1, 2))


def test_primitive_pair_has_integer_coprime_parts():
    n, d = (T / (2 * T + 2)).primitive_pair()
    assert n.coeffs == (0, 1)
    assert d.coeffs == (2, 2)


@given(ratfuncs(), ratfuncs(), ratfuncs())
@settings(max_examples=60, deadline=None)
def test_field_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == 0


@given(ratfuncs(nonzero=True))
@settings(max_examples=60, deadline=None)
def test_inverse(a):
    assert a * a.inverse() == 1


@given(ratfuncs(nonzero=True))
@settings(max_examples=40, deadline=None)
def test_sqrt_of_square(a):
    r = (a * a).sqrt()
    assert r is not None and r * r == a * a


@pytest.mark.parametrize("value", [RatFunc(-1), RatFunc(2), T, T * T + 1])
def test_nonsquares_have_no_root(value):
    assert value.sqrt() is None


@pytest.mark.parametrize("c, core, root", [
    (Fraction(-4), -1, 2),
    (Fraction(12), 3, 2),
    (Fraction(9, 8), 2, Fraction(3, 4)),
])
def test_squarefree_constant(c, core, root):
    got_root, got_core = squarefree_constant(c)
    assert got_core == core
    assert Fraction(got_root) ** 2 * got_core == c


@given(ratfuncs(), ratfuncs(), ratfuncs(), ratfuncs())
@settings(max_examples=40, deadline=None)
def test_quadratic_field_arithmetic(a, b, c, d):
    D = RatFunc(-3)
    u, v = QuadExt(a, b, D), QuadExt(c, d, D)
    assert (u + v) - v == u
    assert u * v == v * u
    if not v.is_zero():
        assert (u / v) * v == u
    assert u.norm() == a * a + 3 * b * b


def test_quad_sqrt_extends_the_field():
    s = quad_sqrt(RatFunc(-4) * T * T)
    assert s * s == as_quad(-4 * T * T)
    assert s.radicand == -1
    assert quad_sqrt(T * T) == as_quad(T)
    u = quad_sqrt(T * (T + 1) ** 2 / 4)
    assert u.radicand == T
    assert u * u == as_quad(T * (T + 1) ** 2 / 4)


def test_resultant_and_discriminant_match_closed_forms():
    a, b, c = T, T + 1, RatFunc(3)
    assert discriminant([c, b, a]) == b * b - 4 * a * c
    # Res(x - r, x - s) = r - s
    assert resultant([-T, 1], [-2, 1]) == T - 2


def test_rational_roots_finds_qt_roots():
    # (x - t)(x - 1/(t+1)) (x^2 + 1)
    p1 = [-T, 1]
    p2 = [-1 / (T + 1), 1]
    prod = [RatFunc(0)] * 3
    for i, a in enumerate(p1):
        for j, b in enumerate(p2):
            prod[i + j] = prod[i + j] + a * b
    full = [RatFunc(0)] * 5
    for i, a in enumerate(prod):
        for j, b in enumerate([RatFunc(1), RatFunc(0), RatFunc(1)]):
            full[i + j] = full[i + j] + a * b
    assert rational_roots(full) == {T, 1 / (T + 1)}


def test_rational_roots_of_irreducible_quartic_is_empty():
    # x^2 - t(1 + 2x^3 + x^4)
    coeffs = [-T, RatFunc(0), RatFunc(1), -2 * T, -T]
    assert rational_roots(coeffs) == set()


def test_birat_basic_identities():
    ctx = BiRat.context(("x", "y"))
    x, y = BiRat.gen(ctx, "x"), BiRat.gen(ctx, "y")
    f = (x * y + 1) / (x - y)
    assert f * (x - y) == x * y + 1
    assert (x * x).derivative("x") == 2 * x
    assert f.inverse() * f == 1
