import random

import pytest

from qpwalk.curve import base_points
from qpwalk.dynamics import (
    FixedPoint,
    NoCollisionUpTo,
    NoRationalFixedPoint,
    OrbitChain,
    Related,
    galois_conjugate,
    iota1,
    iota2,
    orbit_relation,
    random_curve_point,
    relation_certificate,
    symmetry_equation,
    symmetry_fixed_point_certificate,
    tau,
    tau_inv,
    tau_power,
)
from qpwalk.exactnum import RatFunc, T
from qpwalk.points import on_curve, parse_point
from qpwalk.walkcat import lookup

from conftest import W_LABELS

SYMMETRIC_W = [l for l in W_LABELS if lookup(l).is_symmetric()]


def _same_field(P, R):
    rp, rr = P.radicand, R.radicand
    if rr is None:
        return True
    return rp is not None and (rp / rr).sqrt() is not None


@pytest.mark.parametrize("label", W_LABELS)
def test_involution_identities_on_random_points(label):
    D = lookup(label)
    rng = random.Random(label)
    for _ in range(100):
        P = random_curve_point(D, rng)
        i1, i2 = iota1(D, P), iota2(D, P)
        assert iota1(D, i1) == P
        assert iota2(D, i2) == P
        assert iota1(D, tau(D, i1)) == tau_inv(D, P)
        assert iota2(D, tau(D, i2)) == tau_inv(D, P)
        for R in (i1, i2, tau(D, P)):
            assert on_curve(D, R)
            assert _same_field(P, R)


@pytest.mark.parametrize("label", ["IA.1", "IB.3", "IIA.5", "IC.2"])
def test_galois_conjugation_commutes_with_tau(label):
    D = lookup(label)
    rng = random.Random(3)
    for _ in range(20):
        P = random_curve_point(D, rng)
        if P.is_rational():
            continue
        s = galois_conjugate(P)
        assert on_curve(D, s)
        assert galois_conjugate(s) == P
        assert tau(D, s) == galois_conjugate(tau(D, P))


@pytest.mark.parametrize("label", SYMMETRIC_W)
def test_symmetry_conjugates_the_involutions(label):
    D = lookup(label)
    rng = random.Random(5)
    for _ in range(20):
        P = random_curve_point(D, rng)
        assert iota1(D, P).swap() == iota2(D, P.swap())
        assert tau(D, P).swap() == tau_inv(D, P.swap())


def test_ia1_conjugation_swaps_p1_p2():
    D = lookup("IA.1")
    bp = base_points(D)
    assert galois_conjugate(bp.P1) == bp.P2


def test_iic1_reflection_of_q1():
    D = lookup("IIC.1")
    Q = parse_point("([0:1],[1:0])")
    assert iota1(D, Q) == parse_point("([0:1],[0:1])")


def test_iic1_chain():
    D = lookup("IIC.1")
    start = parse_point("([-1:1],[t:t+1])")
    chain = OrbitChain.build(D, start, ["tau"] * 4)
    assert chain.verify(D)
    assert [str(P) for P in chain.points] == [
        "([-1:1],[t:t+1])", "([0:1],[1:0])", "([1:0],[0:1])", "([0:1],[0:1])", "([-1:1],[1:0])",
    ]
    assert chain.collision is None


def test_iic5_chain():
    D = lookup("IIC.5")
    chain = OrbitChain.build(D, parse_point("([-1:1],[t:2t+1])"), ["tau", "tau"])
    assert [str(P) for P in chain.points] == ["([-1:1],[t:2t+1])", "([0:1],[1:0])", "([1:0],[0:1])"]


def test_iib3_chain_passes_through_the_origin():
    # Kbar for E, N, W, SE: at x = 0 the y-roots are {0, inf}; at y = 0 the
    # x-root 0 is double, so iota2 fixes (0, 0); at y = inf the x-roots are {0, inf}
    D = lookup("IIB.3")
    P = parse_point("([1:0],[-1:1])")
    assert iota1(D, P) == parse_point("([1:0],[1:0])")
    assert iota2(D, parse_point("([0:1],[0:1])")) == parse_point("([0:1],[0:1])")
    assert [str(tau_power(D, P, n)) for n in range(4)] == [
        "([1:0],[-1:1])", "([0:1],[1:0])", "([0:1],[0:1])", "([1:0],[1:0])"]
    assert orbit_relation(D, P, parse_point("([1:0],[1:0])"), 64) == Related(3)


def test_chain_verification_catches_a_wrong_arrow():
    D = lookup("IIC.5")
    chain = OrbitChain.build(D, parse_point("([-1:1],[t:2t+1])"), ["tau", "tau"])
    bad = OrbitChain(chain.points, ("tau", "tau_inv"))
    assert not bad.verify(D)


def test_iib1_related_by_two_steps():
    D = lookup("IIB.1")
    P, Q = parse_point("([1:0],[0:1])"), parse_point("([1:0],[1:0])")
    assert orbit_relation(D, P, Q, 64) == Related(2)
    assert orbit_relation(D, Q, P, 64) == Related(-2)


def test_related_zero_iff_equal():
    D = lookup("IIB.1")
    P = parse_point("([1:0],[0:1])")
    assert orbit_relation(D, P, P) == Related(0)
    assert orbit_relation(D, P, tau(D, P)) != Related(0)


def test_iic3_no_collision_within_bound():
    D = lookup("IIC.3")
    P, Q = parse_point("([-1:1],[-t:t+1])"), parse_point("([1:0],[-1:1])")
    assert orbit_relation(D, P, Q, 64) == NoCollisionUpTo(64)
    v = relation_certificate(D, P, Q, 64)
    assert not v.related and v.certified


def test_field_certificate_for_different_fields():
    D = lookup("IA.2")
    bp = base_points(D)
    v = relation_certificate(D, bp.P1, bp.Q1)
    assert v.kind == "field" and v.certified and not v.related


def test_tau_power_inverts():
    D = lookup("IIB.7")
    P = parse_point("([1:0],[-1:1])")
    assert tau_power(D, tau_power(D, P, 5), -5) == P


@pytest.mark.parametrize("label, closed_form", [
    # x1^2 = t(1 + 2 x1^3 + x1^4), written as c[k] at x1^(4-k) after scaling by t
    ("III", [T, 2 * T, RatFunc(-1), RatFunc(0), T]),
    # x0^2 = t(1 + 2 x0^3 + x0^4), c[k] at x0^k after scaling by t
    ("IIC.3", [T, RatFunc(0), RatFunc(-1), 2 * T, T]),
])
def test_symmetry_equation_matches_closed_form(label, closed_form):
    eq = symmetry_equation(lookup(label))
    assert [c * T for c in eq] == closed_form


@pytest.mark.parametrize("label", ["III", "IIC.3"])
def test_symmetric_models_without_rational_fixed_point(label):
    cert = symmetry_fixed_point_certificate(lookup(label))
    assert isinstance(cert, NoRationalFixedPoint)
    assert str(cert) == "NoQ(t)FixedPoint"


def test_simple_walk_has_a_rational_symmetric_point():
    D = lookup("010/101/010")
    cert = symmetry_fixed_point_certificate(D)
    assert isinstance(cert, FixedPoint)
    assert on_curve(D, cert.point)
    assert cert.point.swap() == cert.point


def test_symmetry_certificate_rejects_asymmetric_models():
    with pytest.raises(ValueError):
        symmetry_fixed_point_certificate(lookup("IA.1"))


def test_degenerate_fiber_is_an_error():
    with pytest.raises(ValueError):
        base_points(lookup("111/000/000"))
