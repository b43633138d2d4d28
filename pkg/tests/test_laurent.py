import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qpwalk.exactnum import T, RatFunc
from qpwalk.laurent import Laurent, PrecisionError

coef = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def series(draw, min_val=-2, max_val=2, prec=8):
    val = draw(st.integers(min_val, max_val))
    cs = draw(st.lists(coef, min_size=1, max_size=5))
    cs = [RatFunc(c) + (T if k == 0 else 0) for k, c in enumerate(cs)]
    return Laurent(val, cs, val + prec)


@given(series(), series())
@settings(max_examples=60, deadline=None)
def test_product_with_inverse(a, b):
    q = (a * b) / b
    d = q - a
    assert d.is_zero_known()


@given(series(), series(), series())
@settings(max_examples=40, deadline=None)
def test_distributive(a, b, c):
    assert ((a + b) * c - (a * c + b * c)).is_zero_known()


def test_precision_is_tracked():
    a = Laurent(0, [1, 1], 5)
    b = Laurent(-2, [1], math.inf)
    assert (a * b).prec == 3
    with pytest.raises(PrecisionError):
        (a * b)[3]


def test_exact_inverse_needs_a_precision():
    a = Laurent(0, [1, 1], math.inf)
    with pytest.raises(PrecisionError):
        a.inverse()
    inv = a.inverse(6)
    assert [inv[k] for k in range(6)] == [1, -1, 1, -1, 1, -1]


def test_derivative():
    a = Laurent(-2, [1, 0, 3], math.inf)
    d = a.derivative()
    assert d.val == -3 and d[-3] == -2 and d[-1] == 0


@given(st.lists(coef, min_size=3, max_size=6))
@settings(max_examples=40, deadline=None)
def test_reversion_inverts_composition(cs):
    assume(cs[0] != 0)
    phi = Laurent(1, cs, 1 + len(cs))
    psi = phi.reversion()
    v = phi.compose(psi)
    assert v.valuation() == 1 and v[1] == 1
    for k in range(2, v.prec):
        assert v[k] == 0


def test_compose_with_pole():
    # 1/u composed with u + u^2 is 1/u - 1 + u - ...
    inv_u = Laurent(-1, [1], math.inf)
    phi = Laurent(1, [1, 1], math.inf)
    with pytest.raises(PrecisionError):
        inv_u.compose(phi)
    out = inv_u.compose(Laurent(1, [1, 1], 6))
    assert [out[k] for k in range(-1, 3)] == [1, -1, 1, -1]


def test_composition_needs_positive_valuation():
    with pytest.raises(ValueError):
        Laurent(0, [1], math.inf).compose(Laurent(0, [1, 1], 4))
