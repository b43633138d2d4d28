"""Truncated Laurent series in one parameter with absolute-precision tracking.

A series is known modulo u^prec.  Coefficients are Q(t) or Q(t)(sqrt D)
elements; ``prec`` may be ``math.inf`` for an exact Laurent polynomial.
"""

from __future__ import annotations

import math

from .exactnum import RatFunc, as_ratfunc


class PrecisionError(ArithmeticError):
    """A coefficient beyond the known precision was requested."""


def _scalar(c):
    if isinstance(c, (int,)) or type(c).__name__ == "Fraction":
        return as_ratfunc(c)
    return c


class Laurent:
    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val: int, coeffs, prec):
        coeffs = [_scalar(c) for c in coeffs]
        if prec != math.inf:
            keep = max(0, prec - val)
            coeffs = coeffs[:keep]
        while coeffs and coeffs[0].is_zero():
            coeffs.pop(0)
            val += 1
        while coeffs and prec == math.inf and coeffs[-1].is_zero():
            coeffs.pop()
        if not coeffs:
            val = prec if prec != math.inf else 0
        self.val, self.coeffs, self.prec = val, coeffs, prec

    # construction -----------------------------------------------------------

    @classmethod
    def scalar(cls, c) -> "Laurent":
        return cls(0, [c], math.inf)

    @classmethod
    def monomial(cls, c, e: int, prec=math.inf) -> "Laurent":
        return cls(e, [c], prec)

    @classmethod
    def zero(cls, prec=math.inf) -> "Laurent":
        return cls(0, [], prec)

    # inspection -------------------------------------------------------------

    def is_exact(self) -> bool:
        return self.prec == math.inf

    def is_zero_known(self) -> bool:
        """No nonzero coefficient below the precision."""
        return not self.coeffs

    def valuation(self) -> int:
        if not self.coeffs:
            raise PrecisionError("valuation beyond the known precision")
        return self.val

    def leading(self):
        if not self.coeffs:
            raise PrecisionError("no known nonzero coefficient")
        return self.coeffs[0]

    def __getitem__(self, e: int):
        if e >= self.prec:
            raise PrecisionError(f"coefficient u^{e} unknown (precision {self.prec})")
        if e < self.val or e - self.val >= len(self.coeffs):
            return RatFunc(0)
        return self.coeffs[e - self.val]

    def rel_prec(self):
        return self.prec - self.val

    def truncate(self, prec) -> "Laurent":
        if prec >= self.prec:
            return self
        return Laurent(self.val, self.coeffs, prec)

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "Laurent":
        return other if isinstance(other, Laurent) else Laurent.scalar(other)

    def __add__(self, other):
        o = self._coerce(other)
        prec = min(self.prec, o.prec)
        if not o.coeffs:
            return self.truncate(prec)
        if not self.coeffs:
            return o.truncate(prec)
        val = min(self.val if self.coeffs else prec, o.val if o.coeffs else prec)
        if prec != math.inf:
            n = max(0, prec - val)
        else:
            n = max(self.val + len(self.coeffs), o.val + len(o.coeffs)) - val
        out = [RatFunc(0)] * n
        for s in (self, o):
            for k, c in enumerate(s.coeffs):
                idx = s.val + k - val
                if 0 <= idx < n:
                    out[idx] = out[idx] + c
        return Laurent(val, out, prec)

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.val, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Laurent":
        c = _scalar(c)
        if c.is_zero():
            return Laurent.zero()
        return Laurent(self.val, [c * a for a in self.coeffs], self.prec)

    def __mul__(self, other):
        if not isinstance(other, Laurent):
            return self.scale(other)
        o = other
        va = self.val if self.coeffs else self.prec
        vb = o.val if o.coeffs else o.prec
        prec = min(self.prec + vb, o.prec + va)
        if not self.coeffs or not o.coeffs:
            return Laurent.zero(prec)
        val = self.val + o.val
        n = len(self.coeffs) + len(o.coeffs) - 1
        if prec != math.inf:
            n = min(n, max(0, prec - val))
        out = [RatFunc(0)] * n
        for i, a in enumerate(self.coeffs[:n]):
            if a.is_zero():
                continue
            for j, b in enumerate(o.coeffs[: n - i]):
                out[i + j] = out[i + j] + a * b
        return Laurent(val, out, prec)

    __rmul__ = __mul__

    def inverse(self, rel: int | None = None) -> "Laurent":
        """1/self; an exact series needs a relative precision ``rel``."""
        if not self.coeffs:
            raise PrecisionError("inverse of a series with no known nonzero term")
        if self.is_exact() and len(self.coeffs) == 1:
            return Laurent(-self.val, [1 / self.coeffs[0]], math.inf)
        n = self.rel_prec() if not self.is_exact() else rel
        if n is None or n == math.inf:
            raise PrecisionError("exact inverse needs an explicit precision")
        a = self.coeffs
        inv0 = 1 / a[0]
        out = [inv0]
        for k in range(1, n):
            acc = RatFunc(0)
            for j in range(1, min(k, len(a) - 1) + 1):
                acc = acc + a[j] * out[k - j]
            out.append(-acc * inv0)
        return Laurent(-self.val, out, -self.val + n)

    def __truediv__(self, other):
        if not isinstance(other, Laurent):
            return self.scale(1 / _scalar(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = Laurent.scalar(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def derivative(self) -> "Laurent":
        out = [c * (self.val + k) for k, c in enumerate(self.coeffs)]
        return Laurent(self.val - 1, out, self.prec - 1)

    def compose(self, phi: "Laurent") -> "Laurent":
        """self(phi(u)) for phi with positive valuation (self may have a pole)."""
        if not phi.coeffs or phi.val < 1:
            raise ValueError("composition needs a substitution of positive valuation")
        acc = Laurent.zero(math.inf)
        power = phi ** self.val if self.val >= 0 else phi.inverse() ** (-self.val)
        for c in self.coeffs:
            acc = acc + power.scale(c)
            power = power * phi
        # the unknown tail of self contributes O(phi^prec)
        if self.prec != math.inf:
            tail = self.prec * phi.val
            acc = acc.truncate(min(tail, acc.prec))
        return acc

    def reversion(self) -> "Laurent":
        """The series psi with self(psi(v)) = v, for self of valuation exactly 1."""
        if not self.coeffs or self.val != 1:
            raise ValueError("reversion needs valuation 1")
        n = self.rel_prec()
        c1 = self.coeffs[0]
        psi = Laurent(1, [1 / c1], 2)
        for m in range(2, n + 1):
            # refine psi to precision m+1 by solving for the u^m coefficient
            trial = Laurent(1, psi.coeffs + [RatFunc(0)], m + 1)
            err = self.compose(trial)
            e = err[m]
            trial.coeffs[-1] = -e / c1
            psi = Laurent(1, trial.coeffs, m + 1)
        return psi

    def __repr__(self):
        terms = [f"({c})u^{self.val + k}" for k, c in enumerate(self.coeffs) if not c.is_zero()]
        tail = "" if self.prec == math.inf else f" + O(u^{self.prec})"
        return (" + ".join(terms) or "0") + tail
