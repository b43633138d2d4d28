"""The function field Q(t)(x)[y]/(K) of the kernel curve.

A curve function is r0(x) + r1(x) y with r0, r1 in Q(t)(x).  This module
provides pullbacks by iota1, iota2 and tau, the derivation delta dual to
Omega = dx / K_y, the functions b1 and b2, Laurent expansions at points,
polar divisors, residues of f Omega, orbit residues and the telescoper test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .curve import _quadratic_roots, base_points
from .dynamics import (DEFAULT_ORBIT_BOUND, RelationVerdict, iota1, iota2, relation_certificate,
                       tau_power)
from .exactnum import BiRat, QuadExt, RatFunc, T, as_quad, rational_roots
from .laurent import Laurent, PrecisionError
from .points import ProjPoint, on_curve
from .walkcat import StepSet, fiber_matrix

CTX = BiRat.context(("t", "x"))
_XGEN = BiRat.gen(CTX, "x")


def _birat(c) -> BiRat:
    if isinstance(c, BiRat):
        return c
    if isinstance(c, RatFunc):
        return BiRat.from_ratfunc(CTX, c)
    return BiRat.const(CTX, c)


def _poly_x(coeffs) -> BiRat:
    acc = _birat(0)
    for c in reversed(coeffs):
        acc = acc * _XGEN + _birat(c)
    return acc


@dataclass(frozen=True)
class _Model:
    A: BiRat
    B: BiRat
    C: BiRat
    At: tuple  # coefficients in y of the x^2 part of K
    Bt: tuple
    Ct: tuple


@lru_cache(maxsize=None)
def model(D: StepSet) -> _Model:
    """K = -t (A(x) y^2 + B(x) y + C(x)) = -t (At(y) x^2 + Bt(y) x + Ct(y))."""
    h = fiber_matrix(D)
    A, B, C = (_poly_x([h[i][j] for i in range(3)]) for j in (2, 1, 0))
    At, Bt, Ct = (tuple(h[i][j] for j in range(3)) for i in (2, 1, 0))
    return _Model(A, B, C, At, Bt, Ct)


# ---------------------------------------------------------------------------
# curve functions
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CurveFunction:
    """r0(x) + r1(x) y modulo K(x, y) = 0."""

    D: StepSet
    r0: BiRat
    r1: BiRat

    @classmethod
    def const(cls, D: StepSet, c) -> "CurveFunction":
        return cls(D, _birat(c), _birat(0))

    @classmethod
    def x(cls, D: StepSet) -> "CurveFunction":
        return cls(D, _XGEN, _birat(0))

    @classmethod
    def y(cls, D: StepSet) -> "CurveFunction":
        return cls(D, _birat(0), _birat(1))

    @classmethod
    def of_x(cls, D: StepSet, r) -> "CurveFunction":
        return cls(D, _birat(r), _birat(0))

    def _coerce(self, other) -> "CurveFunction | None":
        if isinstance(other, CurveFunction):
            if other.D != self.D:
                raise ValueError("curve functions on different curves")
            return other
        try:
            return CurveFunction(self.D, _birat(other), _birat(0))
        except Exception:
            return None

    def is_zero(self) -> bool:
        return self.r0.is_zero() and self.r1.is_zero()

    def is_constant(self) -> bool:
        return self.r1.is_zero() and self.r0.derivative("x").is_zero()

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.r0 == o.r0 and self.r1 == o.r1

    def __hash__(self):
        return hash((self.r0, self.r1))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CurveFunction(self.D, self.r0 + o.r0, self.r1 + o.r1)

    __radd__ = __add__

    def __neg__(self):
        return CurveFunction(self.D, -self.r0, -self.r1)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CurveFunction(self.D, self.r0 - o.r0, self.r1 - o.r1)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        m = model(self.D)
        a0, a1, b0, b1 = self.r0, self.r1, o.r0, o.r1
        if a1.is_zero() or b1.is_zero():
            return CurveFunction(self.D, a0 * b0, a0 * b1 + a1 * b0)
        q = a1 * b1 / m.A
        return CurveFunction(self.D, a0 * b0 - q * m.C, a0 * b1 + a1 * b0 - q * m.B)

    __rmul__ = __mul__

    def norm(self) -> BiRat:
        """f times its iota1-conjugate, an element of Q(t)(x)."""
        m = model(self.D)
        a0, a1 = self.r0, self.r1
        return a0 * a0 - a0 * a1 * m.B / m.A + a1 * a1 * m.C / m.A

    def inverse(self) -> "CurveFunction":
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero curve function")
        if self.r1.is_zero():
            return CurveFunction(self.D, self.r0.inverse(), _birat(0))
        m = model(self.D)
        n = self.norm().inverse()
        return CurveFunction(self.D, (self.r0 - self.r1 * m.B / m.A) * n, -self.r1 * n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = CurveFunction.const(self.D, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __str__(self):
        if self.r1.is_zero():
            return str(self.r0)
        return f"{self.r0} + ({self.r1})*y"

    __repr__ = __str__


def _horner(coeffs, value, one):
    acc = None
    for c in reversed(coeffs):
        acc = (one * c) if acc is None else acc * value + c
    return acc if acc is not None else one * 0


def _eval_x_rational(r: BiRat, value, one):
    """r(value) for r in Q(t)(x) and value in a ring containing Q(t)."""
    nc, dc = r.x_coeffs()
    num = _horner(nc, value, one)
    if len(dc) == 1:
        return num * (1 / dc[0])
    return num / _horner(dc, value, one)


def _eval_y_poly(coeffs, yv, one):
    return _horner(list(coeffs), yv, one)


# ---------------------------------------------------------------------------
# pullbacks and the derivation
# ---------------------------------------------------------------------------


def _iota1_y(D: StepSet) -> CurveFunction:
    m = model(D)
    return CurveFunction(D, -m.B / m.A, _birat(-1))


@lru_cache(maxsize=None)
def _iota2_x(D: StepSet) -> CurveFunction:
    m = model(D)
    y = CurveFunction.y(D)
    one = CurveFunction.const(D, 1)
    at = _eval_y_poly(m.At, y, one)
    bt = _eval_y_poly(m.Bt, y, one)
    if at.is_zero():
        raise ValueError(f"degenerate horizontal fibers for {D.name}")
    return -bt / at - CurveFunction.x(D)


def pullback(f: CurveFunction, which: str) -> CurveFunction:
    """f o sigma for sigma in {iota1, iota2, tau, tau_inv}, with tau = iota2 o iota1."""
    D = f.D
    if which == "iota1":
        return CurveFunction(D, f.r0, _birat(0)) + _iota1_y(D) * CurveFunction.of_x(D, f.r1)
    if which == "iota2":
        xp = _iota2_x(D)
        one = CurveFunction.const(D, 1)
        return _eval_x_rational(f.r0, xp, one) + _eval_x_rational(f.r1, xp, one) * CurveFunction.y(D)
    if which == "tau":
        return pullback(pullback(f, "iota2"), "iota1")
    if which == "tau_inv":
        return pullback(pullback(f, "iota1"), "iota2")
    raise ValueError(f"unknown map {which!r}")


def _kernel_partials(D: StepSet):
    """(K_x, K_y) as curve functions, K = -t (A y^2 + B y + C)."""
    m = model(D)
    y = CurveFunction.y(D)
    mt = _birat(-T)
    Kx = (CurveFunction.of_x(D, m.A.derivative("x")) * y * y + CurveFunction.of_x(D, m.B.derivative("x")) * y
          + CurveFunction.of_x(D, m.C.derivative("x"))) * mt
    Ky = (CurveFunction.of_x(D, 2 * m.A) * y + CurveFunction.of_x(D, m.B)) * mt
    return Kx, Ky


def delta(f: CurveFunction) -> CurveFunction:
    """f_x K_y - f_y K_x, so that df = delta(f) dx / K_y."""
    D = f.D
    Kx, Ky = _kernel_partials(D)
    fx = CurveFunction(D, f.r0.derivative("x"), f.r1.derivative("x"))
    fy = CurveFunction.of_x(D, f.r1)
    return fx * Ky - fy * Kx


def b_functions(D: StepSet):
    """(b1, b2) = (iota1(y)(tau(x) - x), x(iota1(y) - y))."""
    x, y = CurveFunction.x(D), CurveFunction.y(D)
    iy = pullback(y, "iota1")
    b2 = x * (iy - y)
    b1 = iy * (pullback(x, "tau") - x)
    return b1, b2


def b2_squared_closed_form(D: StepSet) -> CurveFunction:
    """x^2 (B^2 - 4 A C) / A^2, the square of b2 written through the discriminant."""
    m = model(D)
    return CurveFunction.of_x(D, _XGEN * _XGEN * (m.B * m.B - 4 * m.A * m.C) / (m.A * m.A))


# ---------------------------------------------------------------------------
# local expansions
# ---------------------------------------------------------------------------


class DoubleRamification(ArithmeticError):
    pass


@dataclass(frozen=True)
class SeriesPoint:
    """Affine coordinates (x(u), y(u)) of a formal neighbourhood of ``point``."""

    point: ProjPoint
    x: Laurent
    y: Laurent
    param: str  # "x", "1/x", "y" or "1/y"
    center: QuadExt | None

    def param_label(self) -> str:
        if self.param in ("x", "y"):
            c = self.center
            return f"{self.param} - ({c})" if not c.is_zero() else self.param
        return self.param


def _chart_value(s: Laurent) -> QuadExt | None:
    if not s.coeffs:
        return as_quad(0)
    if s.val < 0:
        return None
    if s.val > 0:
        return as_quad(0)
    return as_quad(s.coeffs[0])


def series_base(sp_x: Laurent, sp_y: Laurent) -> ProjPoint:
    return ProjPoint(_chart_value(sp_x), _chart_value(sp_y))


def _pad(z: Laurent, prec: int) -> Laurent:
    return Laurent(0, [z[e] for e in range(0, min(z.prec, prec))] + [0] * max(0, prec - z.prec), prec)


@lru_cache(maxsize=4096)
def expand_point(D: StepSet, P: ProjPoint, N: int) -> SeriesPoint:
    """Series neighbourhood of P with about N known terms.

    The parameter is the chart coordinate of x when the vertical fiber through P
    has two distinct points, else the chart coordinate of y.
    """
    if not on_curve(D, P):
        raise ValueError(f"{P} is not on the curve")
    h = fiber_matrix(D)
    x_inf, y_inf = P.x is None, P.y is None
    xi0 = as_quad(0) if x_inf else P.x
    eta0 = as_quad(0) if y_inf else P.y

    def pairs(v, inf):
        return (1, v) if inf else (v, 1)

    def H(xi, eta):
        X0, X1 = pairs(xi, x_inf)
        Y0, Y1 = pairs(eta, y_inf)
        acc = 0
        for i in range(3):
            for j in range(3):
                c = h[i][j]
                if not c.is_zero():
                    acc = (X0**i * X1 ** (2 - i) * Y0**j * Y1 ** (2 - j)) * c + acc
        return acc

    def dH(xi, eta, wrt_eta: bool):
        X0, X1 = pairs(xi, x_inf)
        Y0, Y1 = pairs(eta, y_inf)
        acc = 0
        for i in range(3):
            for j in range(3):
                c = h[i][j]
                if c.is_zero():
                    continue
                if wrt_eta:
                    e = (2 - j) if y_inf else j
                    if e == 0:
                        continue
                    other = X0**i * X1 ** (2 - i)
                    var = Y1 if y_inf else Y0
                    acc = other * var ** (e - 1) * (c * e) + acc
                else:
                    e = (2 - i) if x_inf else i
                    if e == 0:
                        continue
                    other = Y0**j * Y1 ** (2 - j)
                    var = X1 if x_inf else X0
                    acc = other * var ** (e - 1) * (c * e) + acc
        return acc

    one = as_quad(1)
    x_side = not as_quad(dH(xi0, eta0, True)).is_zero()
    if not x_side and as_quad(dH(xi0, eta0, False)).is_zero():
        raise DoubleRamification(f"both projections ramified at {P}")
    known0 = xi0 if x_side else eta0
    z0 = eta0 if x_side else xi0
    w = Laurent(0, [known0, one], N)
    z = Laurent(0, [z0], 1)
    p = 1
    while p < N:
        p = min(2 * p, N)
        z = _pad(z, p)
        if x_side:
            z = z - H(w, z) / dH(w, z, True)
        else:
            z = z - H(z, w) / dH(z, w, False)
    xi, eta = (w, z) if x_side else (z, w)
    xs = xi.inverse() if x_inf else xi
    ys = eta.inverse() if y_inf else eta
    if x_side:
        param, center = ("1/x", None) if x_inf else ("x", P.x)
    else:
        param, center = ("1/y", None) if y_inf else ("y", P.y)
    return SeriesPoint(P, xs, ys, param, center)


def evaluate_series(f: CurveFunction, sp: SeriesPoint) -> Laurent:
    one = Laurent.scalar(1)
    r0 = _eval_x_rational(f.r0, sp.x, one) if not f.r0.is_zero() else Laurent.zero()
    if f.r1.is_zero():
        return r0
    return r0 + _eval_x_rational(f.r1, sp.x, one) * sp.y


def _fiber_poly_series(coeffs_birat: BiRat, xs: Laurent) -> Laurent:
    return _eval_x_rational(coeffs_birat, xs, Laurent.scalar(1))


def iota1_series(D: StepSet, sp: SeriesPoint) -> SeriesPoint:
    m = model(D)
    yp = -(_fiber_poly_series(m.B, sp.x) / _fiber_poly_series(m.A, sp.x)) - sp.y
    return SeriesPoint(iota1(D, sp.point), sp.x, yp, sp.param, sp.center)


def iota2_series(D: StepSet, sp: SeriesPoint) -> SeriesPoint:
    m = model(D)
    one = Laurent.scalar(1)
    xp = -(_eval_y_poly(m.Bt, sp.y, one) / _eval_y_poly(m.At, sp.y, one)) - sp.x
    return SeriesPoint(iota2(D, sp.point), xp, sp.y, sp.param, sp.center)


def tau_series(D: StepSet, sp: SeriesPoint, n: int) -> SeriesPoint:
    for _ in range(abs(n)):
        sp = iota2_series(D, iota1_series(D, sp)) if n > 0 else iota1_series(D, iota2_series(D, sp))
    return sp


def param_value(sp_ref: SeriesPoint, sp: SeriesPoint) -> Laurent:
    """The local parameter of ``sp_ref`` evaluated along the series point ``sp``."""
    kind = sp_ref.param
    if kind == "x":
        return sp.x - sp_ref.center
    if kind == "y":
        return sp.y - sp_ref.center
    if kind == "1/x":
        return sp.x.inverse()
    return sp.y.inverse()


@dataclass(frozen=True)
class LaurentExpansion:
    point: ProjPoint
    param: str
    series: Laurent

    @property
    def valuation(self) -> int:
        return self.series.valuation()

    def coefficient(self, e: int):
        return self.series[e]


MAX_TERMS = 160


def local_expand(f: CurveFunction, P: ProjPoint, order: int = 4) -> LaurentExpansion:
    """Expansion of f at P known at least through u^order, with nonzero leading term.

    The identically zero function is returned as an empty series.
    """
    N = max(order + 6, 8)
    while True:
        sp = expand_point(f.D, P, N)
        s = evaluate_series(f, sp)
        if s.prec > order and s.coeffs:
            return LaurentExpansion(P, sp.param_label(), s)
        if N >= MAX_TERMS:
            if f.is_zero():
                return LaurentExpansion(P, sp.param_label(), Laurent.zero())
            raise PrecisionError(f"expansion at {P} did not stabilize")
        N *= 2


def order_at(f: CurveFunction, P: ProjPoint) -> int:
    """ord_P(f), capped above at 0 (only poles matter to the callers)."""
    N = 8
    while True:
        sp = expand_point(f.D, P, N)
        s = evaluate_series(f, sp)
        if s.coeffs and s.val < 0:
            return s.val
        if s.prec >= 1 and (not s.coeffs or s.val >= 0):
            return 0
        if N >= MAX_TERMS:
            raise PrecisionError(f"order at {P} undetermined")
        N *= 2


# ---------------------------------------------------------------------------
# divisors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Divisor:
    """Finite formal sum of points; ``terms`` keeps a stable display order."""

    terms: tuple[tuple[ProjPoint, int], ...]

    def as_dict(self) -> dict[ProjPoint, int]:
        return dict(self.terms)

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.terms)

    @property
    def support(self) -> list[ProjPoint]:
        return [p for p, _ in self.terms]

    def __eq__(self, other):
        if not isinstance(other, Divisor):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def __hash__(self):
        return hash(frozenset(self.terms))

    def __str__(self):
        return " + ".join((f"{m}{p}" if m != 1 else f"{p}") for p, m in self.terms) or "0"


class IncompleteCandidates(RuntimeError):
    """Some pole candidates lie over x-values not covered by known points."""


def _poly_mul(p, q):
    out = [RatFunc(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return out


def _strip_root(p: list, v) -> tuple[list, int]:
    """Divide p by (X - v) as often as possible."""
    k = 0
    p = [as_quad(c) for c in p]
    while len(p) > 1:
        acc = as_quad(0)
        quot = []
        for c in reversed(p):
            acc = acc * v + c
            quot.append(acc)
        if not quot[-1].is_zero():
            break
        p = list(reversed(quot[:-1]))
        k += 1
    return p, k


def default_hints(D: StepSet) -> list[ProjPoint]:
    """Base points with their images under iota1, iota2, tau and tau^-1."""
    bp = base_points(D)
    out = []
    for P in bp.all_points():
        for Q in (P, iota1(D, P), iota2(D, P), tau_power(D, P, 1), tau_power(D, P, -1)):
            if Q not in out:
                out.append(Q)
    return out


def pole_candidates(f: CurveFunction, hints=None) -> list[ProjPoint]:
    """Points that can be poles of f, with a completeness check.

    Poles lie over x = infinity or over zeros of den(r0) den(r1) A.  Every such
    zero must be the x-coordinate of a rational-root fiber or of a hint point.
    """
    D = f.D
    m = model(D)
    hints = default_hints(D) if hints is None else list(hints)
    cands: list[ProjPoint] = []

    def add(P):
        for Q in (P, iota1(D, P)):
            if Q not in cands:
                cands.append(Q)

    bp = base_points(D)
    add(bp.P1)
    add(bp.P2)
    npoly = _poly_mul(_poly_mul(f.r0.x_coeffs()[1], f.r1.x_coeffs()[1]), m.A.x_coeffs()[0])
    while len(npoly) > 1 and npoly[-1].is_zero():
        npoly.pop()
    if len(npoly) > 1:
        h = fiber_matrix(D)
        for a in rational_roots(npoly):
            A_, B_, C_ = (h[0][j] + h[1][j] * a + h[2][j] * a * a for j in (2, 1, 0))
            for yv in _quadratic_roots(A_, B_, C_):
                add(ProjPoint(as_quad(a), yv))
    xs = {}
    for P in hints:
        if P.x is not None:
            xs.setdefault(P.x, P)
    rest = npoly
    for v, P in xs.items():
        rest, k = _strip_root(rest, v)
        if k:
            add(P)
    for P in list(cands):
        if P.x is not None:
            rest, _ = _strip_root(rest, P.x)
    if len(rest) > 1:
        raise IncompleteCandidates(f"{len(rest) - 1} pole x-values not covered for {D.name}")
    return cands


def polar_divisor(f: CurveFunction, hints=None) -> Divisor:
    terms = []
    for P in pole_candidates(f, hints):
        k = order_at(f, P)
        if k < 0:
            terms.append((P, -k))
    return Divisor(tuple(terms))


# ---------------------------------------------------------------------------
# residues of f Omega, Omega = dx / K_y
# ---------------------------------------------------------------------------


def _residue_via_dx(f: CurveFunction, sp: SeriesPoint) -> Laurent:
    m = model(f.D)
    Ky = (_fiber_poly_series(m.A, sp.x) * sp.y).scale(2) + _fiber_poly_series(m.B, sp.x)
    Ky = Ky.scale(-T)
    return evaluate_series(f, sp) * sp.x.derivative() / Ky


def _residue_via_delta(f: CurveFunction, sp: SeriesPoint) -> Laurent:
    D = f.D
    x, y = CurveFunction.x(D), CurveFunction.y(D)
    if sp.param == "x":
        du = delta(x)
    elif sp.param == "y":
        du = delta(y)
    elif sp.param == "1/x":
        du = -delta(x) / (x * x)
    else:
        du = -delta(y) / (y * y)
    return evaluate_series(f, sp) / evaluate_series(du, sp)


class CrossOracleError(AssertionError):
    """Two independent computations of the same quantity disagree."""


def residue(f: CurveFunction, P: ProjPoint):
    """Res_P(f Omega) computed through dx/K_y and through du/delta(u); both must agree."""
    N = 8
    while True:
        sp = expand_point(f.D, P, N)
        try:
            r1 = _residue_via_dx(f, sp)[-1]
            r2 = _residue_via_delta(f, sp)[-1]
        except PrecisionError:
            if N >= MAX_TERMS:
                raise
            N *= 2
            continue
        if as_quad(r1) != as_quad(r2):
            raise CrossOracleError(f"residue routes disagree at {P}: {r1} vs {r2}")
        return as_quad(r1)


# ---------------------------------------------------------------------------
# orbit residues and the telescoper decision
# ---------------------------------------------------------------------------


@dataclass
class OrbitGroup:
    rep: ProjPoint
    members: list  # (point, offset n with tau^n(rep) = point, pole order)
    ores: list = field(default_factory=list)  # ores_j for j = 1..max order, via per-pole charts
    h_coeffs: list = field(default_factory=list)  # [u^-j] h at rep, j = 1..max order
    param: str = ""

    @property
    def max_order(self) -> int:
        return max(k for _, _, k in self.members)

    def regular_by_h(self) -> bool:
        return all(as_quad(c).is_zero() for c in self.h_coeffs)

    def ores_vanish(self) -> bool:
        return all(as_quad(c).is_zero() for c in self.ores)


@dataclass(frozen=True)
class OrbitResidueTable:
    groups: tuple[OrbitGroup, ...]
    relations: dict  # (i, j) -> RelationVerdict for pole indices
    poles: tuple[tuple[ProjPoint, int], ...]
    certified_grouping: bool


def group_poles(D: StepSet, div: Divisor, bound: int = DEFAULT_ORBIT_BOUND):
    """Union-find of the poles by tau-relation; returns (groups, relations)."""
    poles = list(div.terms)
    n = len(poles)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    rel: dict[tuple[int, int], RelationVerdict] = {}
    for i in range(n):
        for j in range(i + 1, n):
            if find(i) == find(j):
                continue
            v = relation_certificate(D, poles[i][0], poles[j][0], bound)
            rel[(i, j)] = v
            if v.related:
                parent[find(j)] = find(i)
    buckets: dict[int, list[int]] = {}
    for i in range(n):
        buckets.setdefault(find(i), []).append(i)
    groups = []
    for idx in buckets.values():
        rep = poles[idx[0]][0]
        members = []
        for i in idx:
            P, k = poles[i]
            off = 0 if i == idx[0] else relation_certificate(D, rep, P, bound).n
            if tau_power(D, rep, off) != P:
                raise AssertionError("orbit offset failed re-verification")
            members.append((P, off, k))
        groups.append(OrbitGroup(rep, members))
    return groups, rel


def _expansions_for_group(f: CurveFunction, g: OrbitGroup, N: int):
    D = f.D
    m = g.max_order
    sp0 = expand_point(D, g.rep, N)
    # route A: h = sum f o tau^n, expanded at the representative
    h = Laurent.zero()
    for P, off, _ in g.members:
        spi = tau_series(D, sp0, off)
        if series_base(spi.x, spi.y) != P:
            raise AssertionError("series orbit does not reach the expected pole")
        h = h + evaluate_series(f, spi)
    h_coeffs = [h[-j] for j in range(1, m + 1)]
    if h.prec < 0:
        raise PrecisionError("h not known through u^-1")
    # route B: each pole in its own chart, reparametrized by u o tau^-n
    ores = [RatFunc(0)] * m
    for P, off, _ in g.members:
        spP = expand_point(D, P, N)
        fv = evaluate_series(f, spP)
        back = tau_series(D, spP, -off)
        psi = param_value(sp0, back)
        coherent = fv.compose(psi.reversion())
        for j in range(1, m + 1):
            ores[j - 1] = ores[j - 1] + coherent[-j]
    return sp0.param_label(), h_coeffs, ores


def orbit_residues(f: CurveFunction, bound: int = DEFAULT_ORBIT_BOUND, div: Divisor | None = None) -> OrbitResidueTable:
    div = polar_divisor(f) if div is None else div
    groups, rel = group_poles(f.D, div, bound)
    for g in groups:
        N = 2 * g.max_order + 8
        while True:
            try:
                g.param, g.h_coeffs, g.ores = _expansions_for_group(f, g, N)
                break
            except PrecisionError:
                if N >= MAX_TERMS:
                    raise
                N *= 2
        for a, b in zip(g.h_coeffs, g.ores):
            if as_quad(a) != as_quad(b):
                raise CrossOracleError(f"orbit residue routes disagree at {g.rep}: {a} vs {b}")
    certified = all(v.certified for v in rel.values())
    return OrbitResidueTable(tuple(groups), rel, tuple(div.terms), certified)


@dataclass(frozen=True)
class TelescoperVerdict:
    exists: bool
    certain: bool
    reason: str  # "regular_orbit_sums", "isolated_pole", "orbit_residue"
    witness: ProjPoint | None
    detail: str
    table: OrbitResidueTable
    divisor: Divisor

    @property
    def label(self) -> str:
        if self.exists:
            return "Yes"
        return "No" if self.certain else "Evidence-limited"


def _pair_certified(table: OrbitResidueTable, a: ProjPoint, b: ProjPoint) -> bool:
    pts = [p for p, _ in table.poles]
    i, j = sorted((pts.index(a), pts.index(b)))
    v = table.relations.get((i, j))
    return v is not None and not v.related and v.certified


def _groups_certified_apart(table: OrbitResidueTable, g1: OrbitGroup, g2: OrbitGroup) -> bool:
    return any(_pair_certified(table, p, q) for p, _, _ in g1.members for q, _, _ in g2.members)


def telescoper_exists(f: CurveFunction, bound: int = DEFAULT_ORBIT_BOUND, div: Divisor | None = None) -> TelescoperVerdict:
    """Decide whether L(f) = tau(g) - g has a solution with L a nonzero operator in delta.

    Yes iff h = sum f o tau^n_i is regular at the representative of every pole
    orbit; the orbit-residue vector is computed independently and must vanish
    exactly when h is regular.
    """
    table = orbit_residues(f, bound, div)
    div = Divisor(table.poles)
    for g in table.groups:
        if g.regular_by_h() != g.ores_vanish():
            raise CrossOracleError(f"h-regularity and orbit residues disagree at {g.rep}")
    failing = [g for g in table.groups if not g.regular_by_h()]
    if not failing:
        return TelescoperVerdict(True, True, "regular_orbit_sums", None,
                                 "h regular at every orbit representative; all orbit residues vanish", table, div)
    # a pole of top order alone in its orbit
    for g in failing:
        for P, _, k in g.members:
            if any(Q != P and kq >= k for Q, _, kq in g.members):
                continue
            others = [Q for Q, kq in div.terms if Q != P and kq >= k and all(Q != M for M, _, _ in g.members)]
            if all(_pair_certified(table, P, Q) for Q in others):
                return TelescoperVerdict(False, True, "isolated_pole", P,
                                         f"pole of order {k} with no other pole of order >= {k} in its orbit",
                                         table, div)
    for g in failing:
        others = [o for o in failing if o is not g]
        if all(_groups_certified_apart(table, g, o) for o in others):
            j = max(i + 1 for i, c in enumerate(g.ores) if not as_quad(c).is_zero())
            return TelescoperVerdict(False, True, "orbit_residue", g.rep,
                                     f"orbit residue of order {j} is nonzero", table, div)
    g = failing[0]
    return TelescoperVerdict(False, False, "orbit_residue", g.rep,
                             "nonzero orbit residues; orbit separation only by bounded search", table, div)
