"""The involutions iota1, iota2, the QRT map tau, orbit search and non-relation certificates.

All maps are Vieta jumps on the fiber quadratics, so the coordinate field of a
point never grows.  A non-relation between two points is either certified by
one of the structural arguments below or reported as bounded search evidence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import random

from .exactnum import RATFUNC_ZERO, QuadExt, RatFunc, T, as_quad, quad_sqrt, rational_roots
from .points import ProjPoint, on_curve
from .walkcat import StepSet, fiber_matrix

__all__ = [
    "ProjPoint", "iota1", "iota2", "tau", "tau_inv", "tau_power", "reflect",
    "galois_conjugate", "orbit_relation", "Related", "NoCollisionUpTo",
    "OrbitChain", "symmetry_fixed_point_certificate", "NoRationalFixedPoint",
    "FixedPoint", "involution_rational_fixed_points", "relation_certificate",
    "RelationVerdict", "random_curve_point",
]

DEFAULT_ORBIT_BOUND = 64


@lru_cache(maxsize=None)
def _h(D: StepSet):
    return fiber_matrix(D)


def _form(coeffs, u: QuadExt | None):
    """sum c[k] u0^k u1^(2-k) at u = u0/u1 (None is [1:0])."""
    if u is None:
        return as_quad(coeffs[2])
    return as_quad(coeffs[0]) + coeffs[1] * u + coeffs[2] * u * u


def _other_root(a, b, c, r: QuadExt | None, what: str) -> QuadExt | None:
    """Second root of a U^2 + b U + c (in P1) given the root r."""
    if a.is_zero() and b.is_zero() and c.is_zero():
        raise ValueError(f"degenerate fiber for {what}")
    if r is None:
        if not a.is_zero():
            raise ValueError(f"point is not on the curve ({what})")
        return None if b.is_zero() else -c / b
    if a.is_zero():
        return None
    return -b / a - r


@lru_cache(maxsize=1 << 16)
def iota1(D: StepSet, P: ProjPoint) -> ProjPoint:
    """Second point of the curve on the vertical line x = x(P)."""
    h = _h(D)
    a, b, c = (_form([h[i][j] for i in range(3)], P.x) for j in (2, 1, 0))
    return ProjPoint(P.x, _other_root(a, b, c, P.y, "iota1"))


@lru_cache(maxsize=1 << 16)
def iota2(D: StepSet, P: ProjPoint) -> ProjPoint:
    """Second point of the curve on the horizontal line y = y(P)."""
    h = _h(D)
    a, b, c = (_form([h[i][j] for j in range(3)], P.y) for i in (2, 1, 0))
    return ProjPoint(_other_root(a, b, c, P.x, "iota2"), P.y)


def tau(D: StepSet, P: ProjPoint) -> ProjPoint:
    return iota2(D, iota1(D, P))


def tau_inv(D: StepSet, P: ProjPoint) -> ProjPoint:
    return iota1(D, iota2(D, P))


def tau_power(D: StepSet, P: ProjPoint, n: int) -> ProjPoint:
    step = tau if n >= 0 else tau_inv
    for _ in range(abs(n)):
        P = step(D, P)
    return P


def reflect(D: StepSet, P: ProjPoint, k: int) -> ProjPoint:
    """The involution iota1 o tau^k applied to P."""
    return iota1(D, tau_power(D, P, k))


def galois_conjugate(P: ProjPoint) -> ProjPoint:
    """sqrt(D) -> -sqrt(D) on both coordinates (identity on Q(t)-points)."""
    return P.conjugate()


# ---------------------------------------------------------------------------
# orbit chains
# ---------------------------------------------------------------------------

_MAPS = {"iota1": iota1, "iota2": iota2, "tau": tau, "tau_inv": tau_inv}


@dataclass(frozen=True)
class OrbitChain:
    """points[k+1] = arrows[k](points[k]); ``collision`` marks a repeated point."""

    points: tuple[ProjPoint, ...]
    arrows: tuple[str, ...]
    collision: int | None = None

    @classmethod
    def build(cls, D: StepSet, start: ProjPoint, arrows) -> "OrbitChain":
        pts = [start]
        for a in arrows:
            pts.append(_MAPS[a](D, pts[-1]))
        seen = {}
        collision = None
        for i, p in enumerate(pts):
            if p in seen and collision is None:
                collision = i
            seen.setdefault(p, i)
        return cls(tuple(pts), tuple(arrows), collision)

    def verify(self, D: StepSet) -> bool:
        """Recompute every arrow exactly and check every point is on the curve."""
        if len(self.points) != len(self.arrows) + 1:
            return False
        for k, a in enumerate(self.arrows):
            if _MAPS[a](D, self.points[k]) != self.points[k + 1]:
                return False
        return all(on_curve(D, p) for p in self.points)

    def render(self) -> str:
        sym = {"iota1": "ι₁", "iota2": "ι₂", "tau": "τ", "tau_inv": "τ⁻¹"}
        out = str(self.points[0])
        for a, p in zip(self.arrows, self.points[1:]):
            out += f" →{sym[a]} {p}"
        return out


# ---------------------------------------------------------------------------
# bounded orbit search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Related:
    n: int

    def __str__(self):
        return f"Related({self.n})"


@dataclass(frozen=True)
class NoCollisionUpTo:
    bound: int

    def __str__(self):
        return f"NoCollisionUpTo({self.bound})"


def _orbit_segment(D: StepSet, P: ProjPoint, half: int) -> dict[ProjPoint, int]:
    seg = {P: 0}
    fwd = back = P
    for k in range(1, half + 1):
        fwd = tau(D, fwd)
        back = tau_inv(D, back)
        seg.setdefault(fwd, k)
        seg.setdefault(back, -k)
    return seg


def _same_field(P: ProjPoint, Q: ProjPoint) -> bool:
    rp, rq = P.radicand, Q.radicand
    if rp is None or rq is None:
        return rp is None and rq is None
    return (rp / rq).sqrt() is not None


def orbit_relation(D: StepSet, P: ProjPoint, Q: ProjPoint, bound: int = DEFAULT_ORBIT_BOUND):
    """Related(n) with tau^n(P) = Q for some |n| <= bound, else NoCollisionUpTo(bound).

    Meet in the middle: tau^k(P) = tau^m(Q) with |k|, |m| <= ceil(bound/2).
    """
    if P == Q:
        return Related(0)
    if not _same_field(P, Q):
        return NoCollisionUpTo(bound)
    half = (bound + 1) // 2
    seg_p = _orbit_segment(D, P, half)
    best = None
    fwd = back = Q
    for m in range(0, half + 1):
        for pt, mm in ((fwd, m), (back, -m)):
            k = seg_p.get(pt)
            if k is not None:
                n = k - mm
                if abs(n) <= bound and (best is None or abs(n) < abs(best)):
                    best = n
        if best is not None:
            break
        fwd, back = tau(D, fwd), tau_inv(D, back)
    if best is None:
        return NoCollisionUpTo(bound)
    if tau_power(D, P, best) != Q:
        raise AssertionError("orbit relation failed re-verification")
    return Related(best)


# ---------------------------------------------------------------------------
# Q(t)-fixed points of iota1, iota2 and the symmetry
# ---------------------------------------------------------------------------


def _roots_in_p1(coeffs) -> list[QuadExt | None]:
    """Roots in P1(Q(t)) of the binary form sum c[k] u0^k u1^(n-k)."""
    coeffs = [RatFunc(c) if not isinstance(c, RatFunc) else c for c in coeffs]
    if all(c.is_zero() for c in coeffs):
        raise ValueError("zero binary form")
    out: list[QuadExt | None] = []
    if coeffs[-1].is_zero():
        out.append(None)
    out.extend(as_quad(r) for r in sorted(rational_roots(coeffs), key=str))
    return out


def involution_rational_fixed_points(D: StepSet, which: str) -> list[ProjPoint]:
    """All points of the curve over Q(t) fixed by iota1 (or iota2).

    A point is fixed exactly when its fiber coordinate is a root of the
    discriminant quartic; the fiber then has a double root.
    """
    from .curve import discriminant_x, discriminant_y

    q = discriminant_x(D) if which == "iota1" else discriminant_y(D)
    out = []
    for u in _roots_in_p1(list(q.coeffs)):
        h = _h(D)
        if which == "iota1":
            a, b, _ = (_form([h[i][j] for i in range(3)], u) for j in (2, 1, 0))
        else:
            a, b, _ = (_form([h[i][j] for j in range(3)], u) for i in (2, 1, 0))
        v = None if a.is_zero() else -b / (2 * a)
        P = ProjPoint(u, v) if which == "iota1" else ProjPoint(v, u)
        if not on_curve(D, P):
            raise AssertionError(f"fixed point {P} not on curve")
        out.append(P)
    return out


@dataclass(frozen=True)
class NoRationalFixedPoint:
    equation: tuple  # coefficients of Kbar(u0, u1, u0, u1) in u0^k u1^(4-k)

    def __str__(self):
        return "NoQ(t)FixedPoint"


@dataclass(frozen=True)
class FixedPoint:
    point: ProjPoint

    def __str__(self):
        return f"FixedPoint{self.point}"


def symmetry_equation(D: StepSet) -> tuple[RatFunc, ...]:
    """Coefficients of Kbar(u0,u1,u0,u1)/(-t) as a binary quartic, u0^k u1^(4-k)."""
    h = _h(D)
    out = [RATFUNC_ZERO] * 5
    for i in range(3):
        for j in range(3):
            out[i + j] = out[i + j] + h[i][j]
    return tuple(out)


def symmetry_fixed_point_certificate(D: StepSet):
    """Decide whether s(x, y) = (y, x) fixes a point of the curve over Q(t)."""
    if not D.is_symmetric():
        raise ValueError(f"{D.name} is not symmetric")
    eq = symmetry_equation(D)
    roots = _roots_in_p1(list(eq))
    if not roots:
        return NoRationalFixedPoint(eq)
    P = ProjPoint(roots[0], roots[0])
    if not on_curve(D, P):
        raise AssertionError("symmetry fixed point not on the curve")
    return FixedPoint(P)


# ---------------------------------------------------------------------------
# non-relation certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RelationVerdict:
    related: bool
    n: int | None
    certified: bool
    kind: str
    detail: str = ""
    bound: int = DEFAULT_ORBIT_BOUND
    chain: OrbitChain | None = field(default=None, compare=False)

    @property
    def certainty(self) -> str:
        return "certified" if self.certified else f"evidence({self.bound})"


_SMALL = 8


@lru_cache(maxsize=None)
def _no_rational_involution_fixed_points(D: StepSet) -> bool:
    return not involution_rational_fixed_points(D, "iota1") and not involution_rational_fixed_points(D, "iota2")


@lru_cache(maxsize=None)
def _no_rational_symmetry_fixed_point(D: StepSet) -> bool:
    return D.is_symmetric() and isinstance(symmetry_fixed_point_certificate(D), NoRationalFixedPoint)


def _reflection_index(D: StepSet, P: ProjPoint, image: ProjPoint, seg: dict) -> int | None:
    """alpha with iota1 tau^alpha (P) = image, searched in a small orbit segment of P."""
    return seg.get(iota1(D, image))


def _chain_for(D: StepSet, P: ProjPoint, n: int) -> OrbitChain:
    return OrbitChain.build(D, P, ["tau" if n > 0 else "tau_inv"] * abs(n))


def relation_certificate(D: StepSet, P: ProjPoint, Q: ProjPoint, bound: int = DEFAULT_ORBIT_BOUND) -> RelationVerdict:
    """Decide P ~ Q, certifying a negative answer when a structural argument applies.

    Arguments, tried in order:
      field            P and Q have coordinates in different fields.
      reflection_parity  rho(P) = iota1 tau^a (P), rho(Q) = iota1 tau^b (Q) with rho the
                       identity or the Galois conjugation; then P ~ Q iff a - b is even
                       and tau^((a-b)/2)(P) = Q.
      galois_conjugate sigma(P) ~ Q with sigma(P) != P, which rules out P ~ Q since tau
                       has no periodic points.
      involution_parity  a reflection of P is related to Q while iota1 and iota2 have no
                       fixed point over Q(t) (for Q(t)-points).
      symmetry         s(P) is related to Q while s has no fixed point over Q(t).
    Otherwise a bounded search decides, with a negative answer as evidence only.
    """
    if P == Q:
        return RelationVerdict(True, 0, True, "search", "equal points", bound, _chain_for(D, P, 0))
    if not _same_field(P, Q):
        return RelationVerdict(False, None, True, "field",
                               f"coordinate fields differ ({P.field_tag()} vs {Q.field_tag()})", bound)
    seg_p = _orbit_segment(D, P, _SMALL)
    seg_q = _orbit_segment(D, Q, _SMALL)
    if Q in seg_p:
        n = seg_p[Q]
        return RelationVerdict(True, n, True, "search", f"tau^{n}", bound, _chain_for(D, P, n))

    conjugations = [("identity", lambda X: X)]
    if not P.is_rational():
        conjugations.append(("galois", galois_conjugate))
    for name, rho in conjugations:
        a = _reflection_index(D, P, rho(P), seg_p)
        b = _reflection_index(D, Q, rho(Q), seg_q)
        if a is not None and b is not None:
            if (a - b) % 2 == 0 and tau_power(D, P, (a - b) // 2) == Q:
                n = (a - b) // 2
                return RelationVerdict(True, n, True, "search", f"tau^{n}", bound, _chain_for(D, P, n))
            return RelationVerdict(False, None, True, "reflection_parity",
                                   f"{name}: rho(P)=iota1 tau^{a}(P), rho(Q)=iota1 tau^{b}(Q)", bound)

    if not P.is_rational():
        sP = galois_conjugate(P)
        if sP != P and sP in seg_q:
            return RelationVerdict(False, None, True, "galois_conjugate",
                                   f"sigma(P) = tau^{seg_q[sP]}(Q)", bound)

    if P.is_rational() and Q.is_rational():
        if _no_rational_involution_fixed_points(D):
            for k, R in ((k, iota1(D, X)) for X, k in seg_p.items()):
                if R in seg_q:
                    return RelationVerdict(False, None, True, "involution_parity",
                                           f"iota1 tau^{k}(P) = tau^{seg_q[R]}(Q); no Q(t)-fixed points of iota1, iota2",
                                           bound)
        if _no_rational_symmetry_fixed_point(D):
            for X, k in seg_p.items():
                S = X.swap()
                if S in seg_q:
                    return RelationVerdict(False, None, True, "symmetry",
                                           f"s tau^{k}(P) = tau^{seg_q[S]}(Q); s has no Q(t)-fixed point", bound)

    rel = orbit_relation(D, P, Q, bound)
    if isinstance(rel, Related):
        return RelationVerdict(True, rel.n, True, "search", f"tau^{rel.n}", bound, _chain_for(D, P, rel.n))
    return RelationVerdict(False, None, False, "bounded_search", f"no collision for |n| <= {bound}", bound)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def random_curve_point(D: StepSet, rng: random.Random, rational_x: bool = False) -> ProjPoint:
    """A point with random x in Q(t) and y solving the fiber quadratic.

    y generally lies in a quadratic extension of Q(t).
    """
    h = _h(D)
    while True:
        x = as_quad(RatFunc(Fraction(rng.randint(-5, 5), rng.randint(1, 4))) + rng.randint(-3, 3) * T)
        if rational_x:
            x = as_quad(Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
        a, b, c = (_form([h[i][j] for i in range(3)], x) for j in (2, 1, 0))
        if a.is_zero():
            continue
        disc = b * b - 4 * a * c
        if disc.is_zero():
            continue
        s = quad_sqrt(disc.a)
        y = (-b + s) / (2 * a)
        P = ProjPoint(x, y)
        if on_curve(D, P):
            return P
