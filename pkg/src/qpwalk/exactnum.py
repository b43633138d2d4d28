"""Exact arithmetic kernel.

Rationals are :class:`fractions.Fraction`.  Univariate polynomials over Q
(:class:`Poly`) and rational functions in ``t`` (:class:`RatFunc`) wrap
FLINT's dense ``fmpq_poly``; :class:`QuadExt` adds a square root of a fixed
radicand.  :class:`BiRat` is a bivariate rational function over Q, used for
the function field Q(t)(x) and for the birational maps of the walk group.

All values are immutable and hashable; equality is structural on the
canonical form.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable, Sequence

import flint

Rat = Fraction


def _to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    c = Fraction(c)
    return flint.fmpq(c.numerator, c.denominator)


def _to_fraction(c: flint.fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


class Poly:
    """Dense univariate polynomial over Q, coefficients lowest degree first."""

    __slots__ = ("_p",)
    var = "t"

    def __init__(self, coeffs: Iterable = ()):
        if isinstance(coeffs, flint.fmpq_poly):
            self._p = coeffs
        else:
            self._p = flint.fmpq_poly([_to_fmpq(c) for c in coeffs])

    @classmethod
    def gen(cls) -> "Poly":
        return cls(flint.fmpq_poly([0, 1]))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls(flint.fmpq_poly([_to_fmpq(c)]))

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(_to_fraction(c) for c in self._p.coeffs())

    @property
    def degree(self) -> int:
        return self._p.degree()

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def leading(self) -> Fraction:
        if self._p.is_zero():
            return Fraction(0)
        return _to_fraction(self._p.coeffs()[-1])

    def monic(self) -> "Poly":
        if self._p.is_zero():
            return self
        return Poly(self._p / self._p.coeffs()[-1])

    def __add__(self, other):
        other = _as_poly(other)
        return NotImplemented if other is None else Poly(self._p + other._p)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_poly(other)
        return NotImplemented if other is None else Poly(self._p - other._p)

    def __rsub__(self, other):
        other = _as_poly(other)
        return NotImplemented if other is None else Poly(other._p - self._p)

    def __mul__(self, other):
        other = _as_poly(other)
        return NotImplemented if other is None else Poly(self._p * other._p)

    __rmul__ = __mul__

    def __neg__(self):
        return Poly(-self._p)

    def __pow__(self, n: int):
        return Poly(self._p**n)

    def __divmod__(self, other):
        other = _as_poly(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = divmod(self._p, other._p)
        return Poly(q), Poly(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def gcd(self, other: "Poly") -> "Poly":
        return Poly(self._p.gcd(other._p))

    def derivative(self) -> "Poly":
        return Poly(self._p.derivative())

    def __call__(self, value):
        acc = 0 * value if not isinstance(value, (int, Fraction)) else Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __eq__(self, other):
        other = _as_poly(other)
        return other is not None and self._p == other._p

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"

    def __str__(self):
        return _poly_str(self.coeffs, self.var)


def _as_poly(x) -> Poly | None:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    return None


def _fmt_rat(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _poly_str(coeffs: Sequence[Fraction], var: str) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if mono and abs(c) == 1:
            body = mono
        elif mono:
            body = f"{_fmt_rat(abs(c))}*{mono}"
        else:
            body = _fmt_rat(abs(c))
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# RatFunc
# ---------------------------------------------------------------------------


class RatFunc:
    """Element of Q(t) as num/den with gcd 1 and monic denominator."""

    __slots__ = ("_n", "_d", "_h")

    def __init__(self, num=0, den=1):
        n = num._p if isinstance(num, Poly) else _raw(num)
        d = den._p if isinstance(den, Poly) else _raw(den)
        self._n, self._d = _normalize(n, d)
        self._h = None

    @classmethod
    def _make(cls, n: flint.fmpq_poly, d: flint.fmpq_poly) -> "RatFunc":
        obj = object.__new__(cls)
        obj._n, obj._d = n, d
        obj._h = None
        return obj

    @classmethod
    def t(cls) -> "RatFunc":
        return cls._make(flint.fmpq_poly([0, 1]), flint.fmpq_poly([1]))

    @property
    def num(self) -> Poly:
        return Poly(self._n)

    @property
    def den(self) -> Poly:
        return Poly(self._d)

    def is_zero(self) -> bool:
        return self._n.is_zero()

    def is_constant(self) -> bool:
        return self._n.degree() <= 0 and self._d.degree() == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return Poly(self._n).leading() if not self._n.is_zero() else Fraction(0)

    def degree(self) -> int:
        """Height: max of numerator and denominator degrees."""
        return max(self._n.degree(), self._d.degree())

    def __add__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return RatFunc._from_raw(self._n + o._n, self._d)
        return RatFunc._from_raw(self._n * o._d + o._n * self._d, self._d * o._d)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        if self._d == o._d:
            return RatFunc._from_raw(self._n - o._n, self._d)
        return RatFunc._from_raw(self._n * o._d - o._n * self._d, self._d * o._d)

    def __rsub__(self, other):
        o = _as_ratfunc(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        if self._n.is_zero() or o._n.is_zero():
            return RATFUNC_ZERO
        g1 = self._n.gcd(o._d)
        g2 = o._n.gcd(self._d)
        n = (self._n / g1) * (o._n / g2) if not (g1.is_one() and g2.is_one()) else self._n * o._n
        d = (self._d / g2) * (o._d / g1) if not (g1.is_one() and g2.is_one()) else self._d * o._d
        lc = d.coeffs()[-1]
        if lc != 1:
            n, d = n / lc, d / lc
        return RatFunc._make(n, d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _as_ratfunc(other)
        return NotImplemented if o is None else o * self.inverse()

    def inverse(self) -> "RatFunc":
        if self._n.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(t)")
        lc = self._n.coeffs()[-1]
        return RatFunc._make(self._d / lc, self._n / lc)

    def __neg__(self):
        return RatFunc._make(-self._n, self._d)

    def __pos__(self):
        return self

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc._make(self._n**k, self._d**k)

    @classmethod
    def _from_raw(cls, n, d):
        n, d = _normalize(n, d)
        return cls._make(n, d)

    def __call__(self, value):
        return Poly(self._n)(value) / Poly(self._d)(value)

    def __eq__(self, other):
        o = _as_ratfunc(other)
        if o is None:
            return NotImplemented if not isinstance(other, QuadExt) else other == self
        return self._n == o._n and self._d == o._d

    def __hash__(self):
        if self._h is None:
            if self._d.degree() == 0 and self._n.degree() <= 0:
                c = _to_fraction(self._n.coeffs()[0]) if not self._n.is_zero() else Fraction(0)
                self._h = hash(c)
            else:
                self._h = hash((tuple(self._n.coeffs()), tuple(self._d.coeffs())))
        return self._h

    def sqrt(self) -> "RatFunc | None":
        """Square root in Q(t) if one exists."""
        if self._n.is_zero():
            return self
        try:
            a = self._n.sqrt()
            b = self._d.sqrt()
        except Exception:
            return None
        return RatFunc._make(a, b) if b.coeffs()[-1] == 1 else RatFunc(Poly(a), Poly(b))

    def primitive_pair(self) -> tuple[Poly, Poly]:
        """num, den scaled to coprime integer polynomials with positive leading den."""
        n, d = self._n, self._d
        lcm = 1
        for c in list(n.coeffs()) + list(d.coeffs()):
            lcm = lcm * int(c.q) // _gcd(lcm, int(c.q))
        nz = [int(c * lcm) for c in n.coeffs()]
        dz = [int(c * lcm) for c in d.coeffs()]
        g = 0
        for c in nz + dz:
            g = _gcd(g, c)
        g = g or 1
        return Poly([Fraction(c, g) for c in nz]), Poly([Fraction(c, g) for c in dz])

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        ns = _poly_str(Poly(self._n).coeffs, "t")
        if self._d.degree() == 0:
            return ns
        ds = _poly_str(Poly(self._d).coeffs, "t")
        if self._n.degree() > 0 and len([c for c in self._n.coeffs() if c != 0]) > 1:
            ns = f"({ns})"
        return f"{ns}/({ds})"

    def pretty(self) -> str:
        """Reduced fraction with integer coefficients, e.g. ``t/(2*t + 1)``."""
        n, d = self.primitive_pair()
        if d.degree == 0:
            return str(Poly([c / d.leading() for c in n.coeffs]))
        ns = str(n)
        if len([c for c in n.coeffs if c != 0]) > 1:
            ns = f"({ns})"
        return f"{ns}/({d})"


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _raw(c) -> flint.fmpq_poly:
    if isinstance(c, flint.fmpq_poly):
        return c
    return flint.fmpq_poly([_to_fmpq(c)])


def _normalize(n: flint.fmpq_poly, d: flint.fmpq_poly):
    if d.is_zero():
        raise ZeroDivisionError("zero denominator")
    if n.is_zero():
        return n, flint.fmpq_poly([1])
    if d.degree() > 0:
        g = n.gcd(d)
        if not g.is_one():
            n, d = n / g, d / g
    lc = d.coeffs()[-1]
    if lc != 1:
        n, d = n / lc, d / lc
    return n, d


def _as_ratfunc(x) -> RatFunc | None:
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return RatFunc._make(flint.fmpq_poly([_to_fmpq(x)]), flint.fmpq_poly([1]))
    if isinstance(x, Poly):
        return RatFunc._make(x._p, flint.fmpq_poly([1]))
    if isinstance(x, QuadExt) and x.b.is_zero():
        return x.a
    return None


RATFUNC_ZERO = RatFunc._make(flint.fmpq_poly([]), flint.fmpq_poly([1]))
RATFUNC_ONE = RatFunc._make(flint.fmpq_poly([1]), flint.fmpq_poly([1]))
T = RatFunc.t()


def ratfunc_normalize(num: Poly, den: Poly) -> RatFunc:
    """Unique reduced representative of num/den with monic denominator."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    return RatFunc(num, den)


def as_ratfunc(x) -> RatFunc:
    r = _as_ratfunc(x)
    if r is None:
        raise TypeError(f"cannot coerce {x!r} to Q(t)")
    return r


# ---------------------------------------------------------------------------
# QuadExt
# ---------------------------------------------------------------------------


class QuadExt:
    """a + b*sqrt(D) over Q(t).

    Elements with ``b == 0`` are plain Q(t) values and combine with any
    radicand; two elements with nonzero ``b`` must share ``D``.
    """

    __slots__ = ("a", "b", "radicand")

    def __init__(self, a=0, b=0, radicand: RatFunc | None = None):
        a = as_ratfunc(a)
        b = as_ratfunc(b)
        if radicand is not None:
            radicand = as_ratfunc(radicand)
        if not b.is_zero():
            if radicand is None:
                raise ValueError("irrational part needs a radicand")
        self.a, self.b = a, b
        self.radicand = radicand if not b.is_zero() else radicand

    @classmethod
    def sqrt_of(cls, radicand) -> "QuadExt":
        """The element sqrt(D); D must not be a square in Q(t)."""
        radicand = as_ratfunc(radicand)
        if radicand.sqrt() is not None:
            raise ValueError(f"radicand {radicand} is a square in Q(t)")
        return cls(0, 1, radicand)

    def is_rational(self) -> bool:
        return self.b.is_zero()

    def is_zero(self) -> bool:
        return self.a.is_zero() and self.b.is_zero()

    def _radicand_with(self, other: "QuadExt") -> RatFunc | None:
        if self.b.is_zero():
            return other.radicand if not other.b.is_zero() else (self.radicand or other.radicand)
        if other.b.is_zero():
            return self.radicand
        if self.radicand != other.radicand:
            raise ValueError(f"radicand mismatch: {self.radicand} vs {other.radicand}")
        return self.radicand

    def __add__(self, other):
        o = _as_quad(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a + o.a, self.b + o.b, self._radicand_with(o))

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_quad(other)
        if o is None:
            return NotImplemented
        return QuadExt(self.a - o.a, self.b - o.b, self._radicand_with(o))

    def __rsub__(self, other):
        o = _as_quad(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = _as_quad(other)
        if o is None:
            return NotImplemented
        D = self._radicand_with(o)
        if self.b.is_zero():
            return QuadExt(self.a * o.a, self.a * o.b, D)
        if o.b.is_zero():
            return QuadExt(self.a * o.a, self.b * o.a, D)
        return QuadExt(self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.radicand)

    def norm(self) -> RatFunc:
        if self.b.is_zero():
            return self.a * self.a
        return self.a * self.a - self.b * self.b * self.radicand

    def inverse(self) -> "QuadExt":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in quadratic extension")
        if self.b.is_zero():
            return QuadExt(self.a.inverse(), 0, self.radicand)
        n = self.norm().inverse()
        return QuadExt(self.a * n, -self.b * n, self.radicand)

    def __truediv__(self, other):
        o = _as_quad(other)
        if o is None:
            return NotImplemented
        self._radicand_with(o)
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = _as_quad(other)
        return NotImplemented if o is None else o * self.inverse()

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.radicand)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadExt(1, 0, self.radicand)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = _as_quad(other)
        if o is None:
            return NotImplemented
        if self.a != o.a or self.b != o.b:
            return False
        return self.b.is_zero() or self.radicand == o.radicand

    def __hash__(self):
        if self.b.is_zero():
            return hash(self.a)
        return hash((self.a, self.b, self.radicand))

    def __repr__(self):
        return f"QuadExt({self})"

    def __str__(self):
        return self.pretty()

    def pretty(self) -> str:
        if self.b.is_zero():
            return self.a.pretty()
        root = f"√{self.radicand.pretty()}" if self.radicand.is_constant() else f"√({self.radicand.pretty()})"
        bpart = self.b.pretty()
        if bpart == "1":
            irr = root
        elif bpart == "-1":
            irr = "-" + root
        elif self.b.is_constant() or bpart.startswith("("):
            irr = f"{bpart}{root}"
        else:
            irr = f"({bpart}){root}"
        if self.a.is_zero():
            return irr
        if irr.startswith("-"):
            return f"{self.a.pretty()} - {irr[1:]}"
        return f"{self.a.pretty()} + {irr}"


def _as_quad(x) -> QuadExt | None:
    if isinstance(x, QuadExt):
        return x
    r = _as_ratfunc(x)
    if r is None:
        return None
    return QuadExt(r, 0, None)


def as_quad(x) -> QuadExt:
    q = _as_quad(x)
    if q is None:
        raise TypeError(f"cannot coerce {x!r} to a quadratic extension element")
    return q


def quadext_arith(x: QuadExt, y: QuadExt, op: str) -> QuadExt:
    """Field operation ``op`` in {'+', '-', '*', '/'} (unicode forms accepted)."""
    if x.radicand is not None and y.radicand is not None and x.radicand != y.radicand:
        raise ValueError(f"radicand mismatch: {x.radicand} vs {y.radicand}")
    if op in ("+",):
        return x + y
    if op in ("-", "−"):
        return x - y
    if op in ("*", "×"):
        return x * y
    if op in ("/", "÷"):
        if y.is_zero():
            raise ZeroDivisionError("division by zero in quadratic extension")
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def squarefree_constant(c: Fraction) -> tuple[Fraction, int]:
    """Write a rational constant as s**2 * D with D a squarefree integer."""
    c = Fraction(c)
    if c == 0:
        return Fraction(0), 0
    n = c.numerator * c.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    square, core = 1, 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            square *= p
        if n % p == 0:
            n //= p
            core *= p
        p += 1
    core *= n
    s = Fraction(square, c.denominator)
    return s, sign * core


def quad_sqrt(value) -> QuadExt:
    """A square root of a Q(t) value, in Q(t) if possible, else in Q(t)(sqrt D).

    Rational constants get a squarefree integer radicand; nonconstant
    values are used unreduced as the radicand.
    """
    r = as_ratfunc(value)
    s = r.sqrt()
    if s is not None:
        return QuadExt(s)
    if r.is_constant():
        scale, core = squarefree_constant(r.constant_value())
        return QuadExt(0, scale, RatFunc(core))
    # r = n d / d^2; pull squared factors of n d out of the radicand
    content, facs = (r._n * r._d).factor()
    scale, core = squarefree_constant(_to_fraction(content))
    rad = flint.fmpq_poly([core])
    root = flint.fmpq_poly([1])
    for f, e in facs:
        root *= f ** (e // 2)
        if e % 2:
            rad *= f
    return QuadExt(0, RatFunc._make(root, flint.fmpq_poly([1])) * scale / RatFunc._make(r._d, flint.fmpq_poly([1])),
                   RatFunc._make(rad, flint.fmpq_poly([1])))


# ---------------------------------------------------------------------------
# polynomials over Q(t): resultants and rational roots
# ---------------------------------------------------------------------------


def _trim(coeffs: Sequence) -> list:
    out = [as_ratfunc(c) for c in coeffs]
    while out and out[-1].is_zero():
        out.pop()
    return out


def _pdivmod(a: list, b: list):
    a = list(a)
    q = [RATFUNC_ZERO] * max(len(a) - len(b) + 1, 1)
    inv = b[-1].inverse()
    while len(a) >= len(b) and a:
        c = a[-1] * inv
        k = len(a) - len(b)
        q[k] = c
        for i, bc in enumerate(b):
            a[k + i] = a[k + i] - c * bc
        a = _trim(a)
    return q, a


def resultant(p: Sequence, q: Sequence) -> RatFunc:
    """Resultant of two polynomials with Q(t) coefficients (lowest first)."""
    a, b = _trim(p), _trim(q)
    if not a or not b:
        return RATFUNC_ZERO
    res = RATFUNC_ONE
    while True:
        da, db = len(a) - 1, len(b) - 1
        if db == 0:
            return res * b[0] ** da
        _, r = _pdivmod(a, b)
        if not r:
            return RATFUNC_ZERO
        dr = len(r) - 1
        if (da * db) % 2:
            res = -res
        res = res * b[-1] ** (da - dr)
        a, b = b, r


def discriminant(p: Sequence) -> RatFunc:
    """Discriminant of a univariate polynomial over Q(t) of degree >= 1."""
    a = _trim(p)
    n = len(a) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    da = [a[i] * i for i in range(1, n + 1)]
    r = resultant(a, da)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return r * sign / a[-1]


def poly_eval(coeffs: Sequence, value):
    """Horner evaluation of a coefficient list (lowest first) at ``value``."""
    acc = None
    for c in reversed(coeffs):
        acc = c if acc is None else acc * value + c
    return acc if acc is not None else 0


def _monic_divisors(p: flint.fmpq_poly) -> list[flint.fmpq_poly]:
    _, facs = p.factor()
    choices = [[f**k for k in range(m + 1)] for f, m in facs]
    out = []
    for combo in product(*choices):
        d = flint.fmpq_poly([1])
        for f in combo:
            d *= f
        out.append(d / d.coeffs()[-1])
    return out


def rational_roots(P: Sequence) -> set[RatFunc]:
    """All roots in Q(t) of a polynomial with Q(t) coefficients (lowest first).

    Denominators are cleared; a root u/v in lowest terms has u dividing the
    constant coefficient and v the leading one, up to a rational scalar c.
    For each monic divisor pair the admissible scalars are the rational
    roots of the gcd of the t-coefficient polynomials in c.
    """
    coeffs = _trim(P)
    if not coeffs:
        raise ValueError("rational_roots of the zero polynomial")
    roots: set[RatFunc] = set()
    k = 0
    while coeffs[k].is_zero():
        k += 1
    if k:
        roots.add(RATFUNC_ZERO)
        coeffs = coeffs[k:]
    if len(coeffs) == 1:
        return roots
    den = flint.fmpq_poly([1])
    for c in coeffs:
        den = den * c._d / den.gcd(c._d)
    polys = [c._n * (den / c._d) for c in coeffs]
    n = len(polys) - 1
    for u in _monic_divisors(polys[0]):
        for v in _monic_divisors(polys[-1]):
            if not u.gcd(v).is_one():
                continue
            # e_i(t) = a_i u^i v^(n-i); need sum_i e_i(t) c^i == 0 for all t
            e = [polys[i] * u**i * v ** (n - i) for i in range(n + 1)]
            top = max(p.degree() for p in e)
            g = None
            for deg in range(top + 1):
                gk = flint.fmpq_poly([p.coeffs()[deg] if deg <= p.degree() else 0 for p in e])
                if gk.is_zero():
                    continue
                g = gk if g is None else g.gcd(gk)
            if g is None:
                continue
            for c, _ in g.roots() if g.degree() > 0 else []:
                if c == 0:
                    continue
                cand = RatFunc._from_raw(u * c, v)
                if poly_eval(coeffs, cand).is_zero():
                    roots.add(cand)
    return roots


# ---------------------------------------------------------------------------
# BiRat: bivariate rational functions over Q
# ---------------------------------------------------------------------------


class BiRat:
    """num/den in Q[v0, v1], gcd-reduced, den with leading coefficient 1."""

    __slots__ = ("ctx", "num", "den", "_h", "_cache")

    def __init__(self, ctx, num, den=None, _reduced=False):
        self.ctx = ctx
        if den is None:
            den = ctx.constant(1)
        if not _reduced:
            num, den = _bi_normalize(num, den)
        self.num, self.den = num, den
        self._h = None
        self._cache = None

    @classmethod
    def context(cls, names: tuple[str, str]):
        return flint.fmpq_mpoly_ctx.get(names, "lex")

    @classmethod
    def gen(cls, ctx, name: str) -> "BiRat":
        return cls(ctx, ctx.gens()[ctx.names().index(name)], None, True)

    @classmethod
    def const(cls, ctx, c) -> "BiRat":
        return cls(ctx, ctx.constant(_to_fmpq(c)), None, True)

    @classmethod
    def from_ratfunc(cls, ctx, r: RatFunc, var: str = "t") -> "BiRat":
        g = ctx.gens()[ctx.names().index(var)]
        return cls(ctx, _fmpq_poly_to_mpoly(ctx, r._n, g), _fmpq_poly_to_mpoly(ctx, r._d, g), True)

    def _coerce(self, other) -> "BiRat | None":
        if isinstance(other, BiRat):
            return other
        if isinstance(other, (int, Fraction)):
            return BiRat(self.ctx, self.ctx.constant(_to_fmpq(other)), None, True)
        if isinstance(other, RatFunc):
            return BiRat.from_ratfunc(self.ctx, other, self.ctx.names()[0])
        return None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return BiRat(self.ctx, self.num + o.num, self.den)
        return BiRat(self.ctx, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return BiRat(self.ctx, self.num - o.num, self.den)
        return BiRat(self.ctx, self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.num.is_zero() or o.num.is_zero():
            return BiRat(self.ctx, self.ctx.constant(0), None, True)
        g1 = self.num.gcd(o.den)
        g2 = o.num.gcd(self.den)
        n = (self.num / g1) * (o.num / g2)
        d = (self.den / g2) * (o.den / g1)
        lc = d.leading_coefficient()
        if lc != 1:
            n, d = n / lc, d / lc
        return BiRat(self.ctx, n, d, True)

    __rmul__ = __mul__

    def inverse(self) -> "BiRat":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero rational function")
        lc = self.num.leading_coefficient()
        return BiRat(self.ctx, self.den / lc, self.num / lc, True)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is None else o * self.inverse()

    def __neg__(self):
        return BiRat(self.ctx, -self.num, self.den, True)

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return BiRat(self.ctx, self.num**k, self.den**k, True)

    def derivative(self, var: str) -> "BiRat":
        n, d = self.num, self.den
        return BiRat(self.ctx, n.derivative(var) * d - n * d.derivative(var), d * d)

    def degree(self) -> int:
        """Largest partial degree of numerator or denominator."""
        degs = list(self.num.degrees()) + list(self.den.degrees())
        return max(degs) if degs else 0

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._h is None:
            self._h = hash((str(self.num), str(self.den)))
        return self._h

    def __repr__(self):
        return f"BiRat({self})"

    def __str__(self):
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def x_coeffs(self, tvar: str = "t", xvar: str = "x"):
        """Numerator and denominator as coefficient lists in ``xvar`` over Q(tvar)."""
        if self._cache is None:
            self._cache = (_mpoly_to_ratfunc_list(self.ctx, self.num, tvar, xvar),
                           _mpoly_to_ratfunc_list(self.ctx, self.den, tvar, xvar))
        return self._cache

    def evaluate(self, value, tvar: str = "t", xvar: str = "x"):
        """Substitute ``value`` (any ring element with Q(t) scalars) for ``xvar``."""
        nc, dc = self.x_coeffs(tvar, xvar)
        return poly_eval(nc, value) / poly_eval(dc, value)


def _bi_normalize(num, den):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return num, den.context().constant(1)
    g = num.gcd(den)
    if not g.is_one():
        num, den = num / g, den / g
    lc = den.leading_coefficient()
    if lc != 1:
        num, den = num / lc, den / lc
    return num, den


def _fmpq_poly_to_mpoly(ctx, p: flint.fmpq_poly, g):
    acc = ctx.constant(0)
    for k, c in enumerate(p.coeffs()):
        if c != 0:
            acc += c * g**k
    return acc


def _mpoly_to_ratfunc_list(ctx, p, tvar: str, xvar: str) -> list[RatFunc]:
    names = ctx.names()
    ti, xi = names.index(tvar), names.index(xvar)
    buckets: dict[int, dict[int, flint.fmpq]] = {}
    for exps, c in p.to_dict().items():
        buckets.setdefault(exps[xi], {})[exps[ti]] = c
    if not buckets:
        return [RATFUNC_ZERO]
    out = []
    for k in range(max(buckets) + 1):
        terms = buckets.get(k, {})
        if not terms:
            out.append(RATFUNC_ZERO)
            continue
        coeffs = [0] * (max(terms) + 1)
        for e, c in terms.items():
            coeffs[e] = c
        out.append(RatFunc._make(flint.fmpq_poly(coeffs), flint.fmpq_poly([1])))
    return out
