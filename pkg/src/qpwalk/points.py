"""Points of the kernel curve in P1 x P1 with coordinates in Q(t) or Q(t)(sqrt D)."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .exactnum import QuadExt, RatFunc, T, as_quad
from .walkcat import StepSet, fiber_matrix


def _coord(v) -> QuadExt | None:
    return None if v is None else as_quad(v)


@dataclass(frozen=True)
class ProjPoint:
    """([x0:x1],[y0:y1]) stored by affine values x0/x1, y0/y1 (``None`` is [1:0])."""

    x: QuadExt | None
    y: QuadExt | None

    @classmethod
    def make(cls, x, y) -> "ProjPoint":
        return cls(_coord(x), _coord(y))

    @classmethod
    def from_proj(cls, x0, x1, y0, y1) -> "ProjPoint":
        return cls(_from_pair(x0, x1), _from_pair(y0, y1))

    def xpair(self) -> tuple[QuadExt, QuadExt]:
        return _pair(self.x)

    def ypair(self) -> tuple[QuadExt, QuadExt]:
        return _pair(self.y)

    @property
    def radicand(self) -> RatFunc | None:
        for c in (self.x, self.y):
            if c is not None and not c.b.is_zero():
                return c.radicand
        return None

    def is_rational(self) -> bool:
        """Both coordinates lie in P1(Q(t))."""
        return self.radicand is None

    def field_tag(self) -> str:
        if not self.is_rational():
            return "quadratic"
        for c in (self.x, self.y):
            if c is not None and not c.a.is_constant():
                return "Q(t)"
        return "Q"

    def conjugate(self) -> "ProjPoint":
        return ProjPoint(*(None if c is None else c.conjugate() for c in (self.x, self.y)))

    def swap(self) -> "ProjPoint":
        return ProjPoint(self.y, self.x)

    def height(self) -> int:
        h = 0
        for c in (self.x, self.y):
            if c is not None:
                h = max(h, c.a.degree(), c.b.degree())
        return h

    def __str__(self):
        return f"({format_coord(self.x)},{format_coord(self.y)})"

    def __repr__(self):
        return f"ProjPoint{self}"


def _pair(v: QuadExt | None):
    if v is None:
        return as_quad(1), as_quad(0)
    return v, as_quad(1)


def _from_pair(c0, c1) -> QuadExt | None:
    c0, c1 = as_quad(c0), as_quad(c1)
    if c1.is_zero():
        if c0.is_zero():
            raise ValueError("[0:0] is not a projective point")
        return None
    return c0 / c1


def _compact_poly(p) -> str:
    out = ""
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
        mag = abs(c)
        num = "" if (mono and mag == 1) else (str(mag) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}")
        sign = "-" if c < 0 else ("+" if out else "")
        out += f"{sign}{num}{mono}"
    return out or "0"


def format_ratfunc_pair(r: RatFunc) -> str:
    """``num:den`` with coprime integer polynomials, e.g. ``t:2t+1``."""
    n, d = r.primitive_pair()
    return f"{_compact_poly(n)}:{_compact_poly(d)}"


def _format_ratfunc(r: RatFunc) -> str:
    n, d = r.primitive_pair()
    num = _compact_poly(n)
    if d.degree == 0 and d.coeffs[0] == 1:
        return num
    if any(ch in num[1:] for ch in "+-"):
        num = f"({num})"
    den = _compact_poly(d)
    if not re.fullmatch(r"\d+|t(\^\d+)?", den):
        den = f"({den})"
    return f"{num}/{den}"


def _is_negative(r: RatFunc) -> bool:
    n, _ = r.primitive_pair()
    return not n.is_zero() and n.coeffs[n.degree] < 0


def format_value(q: QuadExt) -> str:
    """a+b√D with integer-primitive pieces, e.g. ``t-t√-1`` or ``2√-1``."""
    if q.b.is_zero():
        return _format_ratfunc(q.a)
    D = q.radicand
    root = f"√{_format_ratfunc(D)}" if D.is_constant() else f"√({_format_ratfunc(D)})"
    neg = _is_negative(q.b)
    mag = -q.b if neg else q.b
    body = _format_ratfunc(mag)
    if body == "1":
        irr = root
    elif not any(ch in body[1:] for ch in "+-") or body.startswith("("):
        irr = body + root
    else:
        irr = f"({body}){root}"
    if q.a.is_zero():
        return ("-" if neg else "") + irr
    return _format_ratfunc(q.a) + ("-" if neg else "+") + irr


def format_coord(v: QuadExt | None) -> str:
    if v is None:
        return "[1:0]"
    if v.b.is_zero():
        return f"[{format_ratfunc_pair(v.a)}]"
    return f"[{format_value(v)}:1]"


def on_curve(D: StepSet, P: ProjPoint) -> bool:
    """Exact test that P lies on the curve Kbar = 0."""
    h = fiber_matrix(D)
    x0, x1 = P.xpair()
    y0, y1 = P.ypair()
    acc = as_quad(0)
    for i in range(3):
        for j in range(3):
            c = h[i][j]
            if not c.is_zero():
                acc = acc + c * x0**i * x1 ** (2 - i) * y0**j * y1 ** (2 - j)
    return acc.is_zero()


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|(√)|([-+*/^()]))")


class _Parser:
    """Recursive descent over numbers, t, + - * / ^, parentheses and √.

    Juxtaposition multiplies, so ``2t``, ``1/2t`` and ``(t+1)√-1`` parse as
    written by :func:`format_value`.
    """

    def __init__(self, text: str):
        self.toks = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse {text!r} at offset {pos}")
            self.toks.append(next(g for g in m.groups() if g is not None))
            pos = m.end()
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise ValueError(f"expected {expected or 'a token'}, got {tok!r}")
        self.i += 1
        return tok

    def parse(self) -> QuadExt:
        v = self.expr()
        if self.peek() is not None:
            raise ValueError(f"trailing input at {self.peek()!r}")
        return v

    def expr(self):
        v = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while True:
            tok = self.peek()
            if tok in ("*", "/"):
                self.take()
                w = self.unary()
                v = v * w if tok == "*" else v / w
            elif tok is not None and (tok.isdigit() or tok in ("t", "(", "√")):
                v = v * self.power()
            else:
                return v

    def unary(self):
        if self.peek() == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek() == "^":
            self.take()
            v = v ** int(self.take())
        return v

    def atom(self):
        tok = self.take()
        if tok.isdigit():
            return as_quad(int(tok))
        if tok == "t":
            return as_quad(T)
        if tok == "(":
            v = self.expr()
            self.take(")")
            return v
        if tok == "√":
            sign = -1 if self.peek() == "-" and self.take() else 1
            rad = self.atom() if self.peek() != "t" else self.power()
            if not rad.is_rational():
                raise ValueError("nested square roots are not supported")
            return QuadExt.sqrt_of(sign * rad.a)
        raise ValueError(f"unexpected token {tok!r}")


def parse_value(text: str) -> QuadExt:
    """Inverse of :func:`format_value`."""
    return _Parser(text).parse()


def _parse_coord(text: str) -> QuadExt | None:
    inner = text.strip()
    if not (inner.startswith("[") and inner.endswith("]")):
        raise ValueError(f"coordinate must be bracketed: {text!r}")
    depth, cut = 0, None
    for k, ch in enumerate(inner[1:-1]):
        depth += ch == "("
        depth -= ch == ")"
        if ch == ":" and depth == 0:
            cut = k + 1
    if cut is None:
        raise ValueError(f"missing ':' in {text!r}")
    return _from_pair(parse_value(inner[1:cut]), parse_value(inner[cut + 1:-1]))


def parse_point(text: str) -> ProjPoint:
    """Parse ``([a:b],[c:d])`` as printed by ``str(ProjPoint)``."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ValueError(f"point must look like ([a:b],[c:d]): {text!r}")
    body = s[1:-1]
    cut = body.index("],") + 1
    return ProjPoint(_parse_coord(body[:cut]), _parse_coord(body[cut + 1:]))
