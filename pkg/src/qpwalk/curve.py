"""Discriminants, smoothness, base points and fixed base points of the kernel curve."""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import RATFUNC_ZERO, QuadExt, RatFunc, T, as_quad, discriminant, quad_sqrt
from .points import ProjPoint, on_curve
from .walkcat import StepSet, fiber_matrix


@dataclass(frozen=True)
class BinaryQuartic:
    """sum c[k] u0^k u1^(4-k) for a pair of homogeneous variables (u0, u1)."""

    coeffs: tuple[RatFunc, ...]

    def __call__(self, u0, u1):
        return sum((c * u0**k * u1 ** (4 - k) for k, c in enumerate(self.coeffs)), RATFUNC_ZERO)

    def at_infinity(self) -> RatFunc:
        """Value at [1:0]."""
        return self.coeffs[4]

    def at_zero(self) -> RatFunc:
        """Value at [0:1]."""
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)


def _quad_product(p, q):
    out = [RATFUNC_ZERO] * 5
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _disc_from(A, B, C) -> BinaryQuartic:
    bb = _quad_product(B, B)
    ac = _quad_product(A, C)
    return BinaryQuartic(tuple(T * T * (bb[k] - 4 * ac[k]) for k in range(5)))


def fiber_quadratics_x(D: StepSet):
    """(A, B, C) in (x0, x1): the curve reads A y0^2 + B y0 y1 + C y1^2 = 0.

    Each entry lists coefficients of x0^k x1^(2-k), k = 0, 1, 2.
    """
    h = fiber_matrix(D)
    return tuple(tuple(h[k][j] for k in range(3)) for j in (2, 1, 0))


def fiber_quadratics_y(D: StepSet):
    """(A, B, C) in (y0, y1): the curve reads A x0^2 + B x0 x1 + C x1^2 = 0."""
    h = fiber_matrix(D)
    return tuple(tuple(h[i][k] for k in range(3)) for i in (2, 1, 0))


def discriminant_x(D: StepSet) -> BinaryQuartic:
    return _disc_from(*fiber_quadratics_x(D))


def discriminant_y(D: StepSet) -> BinaryQuartic:
    return _disc_from(*fiber_quadratics_y(D))


def has_simple_roots(q: BinaryQuartic) -> bool:
    """All four roots of the binary quartic in P1 are distinct."""
    if q.is_zero():
        return False
    c = list(q.coeffs)
    if c[4].is_zero() and c[3].is_zero():
        return False  # double root at [1:0]
    while c and c[-1].is_zero():
        c.pop()
    if len(c) - 1 < 3:
        return False
    return not discriminant(c).is_zero()


SMOOTH = "smooth_genus1"
SINGULAR = "singular"


def is_smooth(D: StepSet) -> str:
    sx = has_simple_roots(discriminant_x(D))
    sy = has_simple_roots(discriminant_y(D))
    if sx != sy:
        raise AssertionError(f"discriminant verdicts disagree for {D.name}")
    return SMOOTH if sx else SINGULAR


# ---------------------------------------------------------------------------
# base points
# ---------------------------------------------------------------------------


def _quadratic_roots(a, b, c) -> list[QuadExt | None]:
    """Roots in P1 of a U^2 + b U + c (U affine, None for infinity), ordered.

    With a != 0 the root with +sqrt comes first; with a == 0 infinity comes first.
    """
    a, b, c = (RatFunc(v) if not isinstance(v, RatFunc) else v for v in (a, b, c))
    if a.is_zero() and b.is_zero() and c.is_zero():
        raise ValueError("excluded model: degenerate boundary quadratic")
    if a.is_zero():
        if b.is_zero():
            return [None, None]
        return [None, as_quad(-c / b)]
    s = quad_sqrt(b * b - 4 * a * c)
    return [(-as_quad(b) + s) / (2 * a), (-as_quad(b) - s) / (2 * a)]


def _inv(u: QuadExt | None) -> QuadExt | None:
    """Affine value of the reciprocal chart: U -> 1/U, with 0 <-> infinity."""
    if u is None:
        return as_quad(0)
    if u.is_zero():
        return None
    return u.inverse()


@dataclass(frozen=True)
class BasePointSet:
    P1: ProjPoint
    P2: ProjPoint
    Q1: ProjPoint
    Q2: ProjPoint
    x0_zero: tuple[ProjPoint, ...]
    y0_zero: tuple[ProjPoint, ...]
    tags: dict

    def named(self) -> dict[str, ProjPoint]:
        return {"P1": self.P1, "P2": self.P2, "Q1": self.Q1, "Q2": self.Q2}

    def all_points(self) -> list[ProjPoint]:
        out: list[ProjPoint] = []
        for P in (self.P1, self.P2, self.Q1, self.Q2, *self.x0_zero, *self.y0_zero):
            if P not in out:
                out.append(P)
        return out


def _tag(points) -> str:
    if any(not P.is_rational() for P in points):
        return "quadratic"
    return "Q" if all(P.field_tag() == "Q" for P in points) else "Q(t)"


def base_points(D: StepSet) -> BasePointSet:
    """The boundary points of the curve (x or y at 0 or infinity)."""
    d = D.d
    P = [ProjPoint(None, y) for y in _quadratic_roots(d(1, 1), d(1, 0), d(1, -1))]
    Q = [ProjPoint(_inv(w), None) for w in _quadratic_roots(d(-1, 1), d(0, 1), d(1, 1))]
    X0 = [ProjPoint(as_quad(0), y) for y in _quadratic_roots(d(-1, 1), d(-1, 0), d(-1, -1))]
    Y0 = [ProjPoint(x, as_quad(0)) for x in _quadratic_roots(d(1, -1), d(0, -1), d(-1, -1))]
    for pt in P + Q + X0 + Y0:
        if not on_curve(D, pt):
            raise AssertionError(f"base point {pt} not on the curve of {D.name}")
    tags = {"P": _tag(P), "Q": _tag(Q), "x0=0": _tag(X0), "y0=0": _tag(Y0)}
    return BasePointSet(P[0], P[1], Q[0], Q[1], tuple(dict.fromkeys(X0)), tuple(dict.fromkeys(Y0)), tags)


# ---------------------------------------------------------------------------
# fixed base points
# ---------------------------------------------------------------------------

_O = as_quad(0)
_FIXED_TABLE = {
    "iota1": [
        (ProjPoint(_O, None), ((-1, 0), (-1, 1))),
        (ProjPoint(_O, _O), ((-1, 0), (-1, -1))),
        (ProjPoint(None, _O), ((1, 0), (1, -1))),
        (ProjPoint(None, None), ((1, 0), (1, 1))),
    ],
    "iota2": [
        (ProjPoint(_O, None), ((0, 1), (-1, 1))),
        (ProjPoint(_O, _O), ((-1, -1), (0, -1))),
        (ProjPoint(None, _O), ((0, -1), (1, -1))),
        (ProjPoint(None, None), ((0, 1), (1, 1))),
    ],
}


def _fmt_cond(cond) -> str:
    return "=".join(f"d[{i},{j}]" for i, j in cond) + "=0"


def discriminant_at(D: StepSet, P: ProjPoint, which: str):
    """Delta^x at x(P) for iota1, Delta^y at y(P) for iota2."""
    if which == "iota1":
        q, (u0, u1) = discriminant_x(D), P.xpair()
    else:
        q, (u0, u1) = discriminant_y(D), P.ypair()
    return sum((c * u0**k * u1 ** (4 - k) for k, c in enumerate(q.coeffs)), as_quad(0))


def fixed_base_points(D: StepSet, which: str) -> list[tuple[ProjPoint, str]]:
    """Base points fixed by iota1 or iota2, from the d-conditions.

    Each reported point is re-verified to lie on the curve with vanishing
    discriminant at the relevant coordinate.
    """
    if which not in _FIXED_TABLE:
        raise ValueError("which must be 'iota1' or 'iota2'")
    out = []
    for P, cond in _FIXED_TABLE[which]:
        if all(D.d(i, j) == 0 for i, j in cond):
            if not on_curve(D, P) or not discriminant_at(D, P, which).is_zero():
                raise AssertionError(f"table point {P} fails the discriminant check")
            out.append((P, _fmt_cond(cond)))
    return out
