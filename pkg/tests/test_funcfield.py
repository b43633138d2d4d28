import random
from fractions import Fraction

import pytest

from qpwalk.curve import base_points
from qpwalk.dynamics import tau_inv
from qpwalk.exactnum import T, as_quad
from qpwalk.funcfield import (
    CrossOracleError,
    CurveFunction,
    Divisor,
    b2_squared_closed_form,
    delta,
    local_expand,
    order_at,
    orbit_residues,
    polar_divisor,
    pullback,
    residue,
    telescoper_exists,
)
from qpwalk.points import parse_point
from qpwalk.walkcat import lookup

from conftest import NONGENERIC_LABELS, W_LABELS, b2_divisor, b2_verdict, b_pair

EXCEPTIONAL = {"IIB.1", "IIB.2", "IIB.3", "IIB.6", "IIB.7", "IIC.1", "IIC.2", "IIC.4", "IIC.5"}


def _xy(D):
    return CurveFunction.x(D), CurveFunction.y(D)


def _random_function(D, rng):
    x, y = _xy(D)

    def c():
        return Fraction(rng.randint(-3, 3), rng.randint(1, 3)) + rng.randint(-1, 1) * T

    return (c() + c() * x + c() * x * x + (c() + c() * x) * y) / x


def _residue_sum(f, div):
    return sum((residue(f, P) for P, _ in div.terms), as_quad(0))


# --- algebraic identities ---------------------------------------------------


@pytest.mark.parametrize("label", W_LABELS)
def test_b_functions_identities(label):
    D = lookup(label)
    b1, b2 = b_pair(label)
    x, y = _xy(D)
    assert pullback(b2, "iota1") == -b2
    assert b1 + b2 == pullback(x * y, "tau") - x * y


@pytest.mark.parametrize("label", W_LABELS)
def test_iota2_antisymmetric_partner_of_b1(label):
    D = lookup(label)
    b1, _ = b_pair(label)
    x, y = _xy(D)
    c = pullback(b1, "iota1")
    assert c == y * (pullback(x, "iota2") - x)
    assert pullback(c, "iota2") == -c


@pytest.mark.parametrize("label", W_LABELS)
def test_tau_and_inverse_cancel(label):
    D = lookup(label)
    rng = random.Random(label)
    for _ in range(3):
        f = _random_function(D, rng)
        assert pullback(pullback(f, "tau"), "tau_inv") == f
        assert pullback(pullback(f, "iota1"), "iota1") == f
        assert pullback(pullback(f, "iota2"), "iota2") == f


@pytest.mark.parametrize("label", W_LABELS)
def test_delta_kills_constants_and_is_a_derivation(label):
    D = lookup(label)
    x, y = _xy(D)
    assert delta(CurveFunction.const(D, 3 + T)).is_zero()
    assert delta(x * y) == delta(x) * y + x * delta(y)


@pytest.mark.parametrize("label", W_LABELS)
def test_delta_commutes_with_tau(label):
    D = lookup(label)
    rng = random.Random(f"delta-{label}")
    for _ in range(20):
        f = _random_function(D, rng)
        assert delta(pullback(f, "tau")) == pullback(delta(f), "tau")


@pytest.mark.parametrize("label", W_LABELS)
def test_b2_squared_closed_form(label):
    _, b2 = b_pair(label)
    assert b2 * b2 == b2_squared_closed_form(lookup(label))


# --- polar divisors -----------------------------------------------------------


@pytest.mark.parametrize("label", W_LABELS)
def test_b2_poles_lie_on_base_points_and_their_tau_preimages(label):
    D = lookup(label)
    bp = base_points(D)
    allowed = {bp.P1, bp.P2, bp.Q1, bp.Q2, tau_inv(D, bp.Q1), tau_inv(D, bp.Q2)}
    div = b2_divisor(label)
    assert div.degree > 0
    assert set(div.support) <= allowed


def test_iii_divisor_and_x_valuation():
    D = lookup("III")
    assert str(b2_divisor("III")) == "([1:0],[0:1]) + ([0:1],[1:0]) + ([0:1],[-1:1])"
    x, _ = _xy(D)
    # P1 = P2, so x ramifies there: a double pole, while b2 has a simple one
    P1 = parse_point("([1:0],[0:1])")
    assert order_at(x, P1) == -2
    assert order_at(b_pair("III")[1], P1) == -1


@pytest.mark.parametrize("label", [l for l in NONGENERIC_LABELS if l.startswith("IID.")])
def test_iid_triple_pole_at_p1(label):
    P1 = base_points(lookup(label)).P1
    assert P1 == parse_point("([1:0],[1:0])")
    assert order_at(b_pair(label)[1], P1) == -3


def test_iib1_double_poles():
    assert str(b2_divisor("IIB.1")) == "2([1:0],[1:0]) + 2([1:0],[0:1])"


@pytest.mark.parametrize("label, expected", [
    ("IIC.5", "([1:0],[0:1]) + ([1:0],[-1:1]) + ([-1:1],[1:0]) + ([-1:1],[t:2t+1])"),
    ("IIC.3", "([1:0],[0:1]) + ([1:0],[-1:1]) + ([-1:1],[1:0]) + ([-1:1],[-t:t+1])"),
    ("IIB.7", "2([1:0],[1:0]) + 2([1:0],[-1:1]) + ([-1:1],[1:0]) + ([-1:1],[0:1])"),
])
def test_polar_divisor_strings(label, expected):
    assert str(b2_divisor(label)) == expected


def test_local_expansion_of_x_at_infinity():
    D = lookup("III")
    x, _ = _xy(D)
    e = local_expand(x, parse_point("([1:0],[0:1])"))
    assert e.param == "y"
    assert e.valuation == -2


# --- residues -----------------------------------------------------------------


@pytest.mark.parametrize("label", W_LABELS)
def test_residue_theorem_for_b2_and_b1(label):
    b1, b2 = b_pair(label)
    assert _residue_sum(b2, b2_divisor(label)).is_zero()
    assert _residue_sum(b1, polar_divisor(b1)).is_zero()


@pytest.mark.slow
@pytest.mark.parametrize("label", W_LABELS)
def test_residue_theorem_for_random_functions(label):
    D = lookup(label)
    rng = random.Random(f"res-{label}")
    for _ in range(5):
        f = _random_function(D, rng)
        assert _residue_sum(f, polar_divisor(f)).is_zero()


@pytest.mark.parametrize("label", W_LABELS)
def test_delta_lowers_pole_order_by_one(label):
    _, b2 = b_pair(label)
    db2 = delta(b2)
    for P, k in b2_divisor(label).terms:
        assert order_at(db2, P) == -k - 1


@pytest.mark.parametrize("label", NONGENERIC_LABELS)
def test_iota1_maps_residues_of_b2_to_themselves(label):
    from qpwalk.dynamics import iota1

    D = lookup(label)
    _, b2 = b_pair(label)
    div = b2_divisor(label).as_dict()
    for P, k in div.items():
        Q = iota1(D, P)
        if Q != P and Q in div:
            # b2 is iota1-odd and Omega is iota1-odd
            assert residue(b2, P) == residue(b2, Q)


# --- orbit residues and the telescoper decision ---------------------------------


@pytest.mark.parametrize("label", W_LABELS)
def test_telescoper_routes_agree(label):
    v = b2_verdict(label)
    for g in v.table.groups:
        assert g.regular_by_h() == g.ores_vanish()
    assert v.exists == all(g.ores_vanish() for g in v.table.groups)


def test_exceptional_set():
    yes = {l for l in W_LABELS if b2_verdict(l).exists}
    assert yes == EXCEPTIONAL
    assert all(b2_verdict(l).label == "No" for l in set(W_LABELS) - yes)


def test_iic1_orbit_residue_vanishes():
    groups = b2_verdict("IIC.1").table.groups
    assert all(as_quad(c).is_zero() for g in groups for c in g.ores)


def test_iic3_orbit_residue_is_nonzero():
    v = b2_verdict("IIC.3")
    assert v.reason == "orbit_residue" and v.certain
    assert any(not g.ores_vanish() for g in v.table.groups)


@pytest.mark.parametrize("label", ["IIB.1", "IIB.2", "IIB.3", "IIB.6", "IIB.7"])
def test_order_two_orbit_residues_vanish(label):
    for g in b2_verdict(label).table.groups:
        assert g.max_order <= 2
        assert g.ores_vanish()


@pytest.mark.parametrize("label", ["IIC.3", "IIC.5", "IIB.7", "IID.4"])
def test_verdict_does_not_depend_on_the_representative(label):
    div = b2_divisor(label)
    base = b2_verdict(label)
    terms = list(div.terms)
    for shift in range(1, len(terms)):
        rotated = Divisor(tuple(terms[shift:] + terms[:shift]))
        v = telescoper_exists(b_pair(label)[1], div=rotated)
        assert v.exists == base.exists
        assert sorted(g.ores_vanish() for g in v.table.groups) == sorted(g.ores_vanish() for g in base.table.groups)


def test_ia1_isolated_pole_witness():
    v = b2_verdict("IA.1")
    assert v.reason == "isolated_pole" and v.certain
    assert v.witness == base_points(lookup("IA.1")).P1


def test_iid_witness_is_the_triple_pole():
    v = b2_verdict("IID.4")
    assert v.reason == "isolated_pole"
    assert v.witness == parse_point("([1:0],[1:0])")
    assert "order 3" in v.detail


def test_orbit_residues_flag_route_disagreement(monkeypatch):
    import qpwalk.funcfield as ff

    real = ff._expansions_for_group

    def skewed(f, g, N):
        param, h, ores = real(f, g, N)
        return param, h, [c + 1 for c in ores]

    monkeypatch.setattr(ff, "_expansions_for_group", skewed)
    with pytest.raises(CrossOracleError):
        orbit_residues(b_pair("IIC.5")[1], div=b2_divisor("IIC.5"))
