"""Finiteness of the group generated by the birational involutions i1, i2 of the walk."""

from __future__ import annotations

import random
from math import gcd
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import BiRat
from .walkcat import StepSet, decompose

DEFAULT_GROUP_BOUND = 200
DEFAULT_SAMPLES = 5
DEGREE_CAP = 256
EXACT_STEPS = 24
MODULUS = (1 << 61) - 1


@dataclass(frozen=True)
class Finite:
    """The group has ``order`` elements (twice the order of f = i2 o i1)."""

    order: int
    confirmed: bool = True

    def __str__(self):
        return f"Finite({self.order})"


@dataclass(frozen=True)
class InfiniteUpTo:
    bound: int
    flag: str = ""

    def __str__(self):
        return f"InfiniteUpTo({self.bound})" + (f"[{self.flag}]" if self.flag else "")


class ExceptionalLocus(ZeroDivisionError):
    """A sample point met a zero denominator of i1 or i2."""


class BirationalPair:
    """i1(x, y) = (x, A[-1](x)/(A[1](x) y)) and i2(x, y) = (B[-1](y)/(B[1](y) x), y).

    The same formulas act on Fractions, residues mod a prime (``modulus``)
    and symbolic BiRat values.
    """

    def __init__(self, D: StepSet, modulus: int | None = None):
        D.require_unweighted()
        dec = decompose(D)
        self.A = dec.A
        self.B = dec.B
        if dec.A[1].is_zero() or dec.B[1].is_zero() or dec.A[-1].is_zero() or dec.B[-1].is_zero():
            raise ValueError(f"degenerate involutions for {D.name}")
        self.modulus = modulus

    def _div(self, a, b):
        if self.modulus is None:
            if b == 0:
                raise ExceptionalLocus("zero denominator")
            return a / b
        b %= self.modulus
        if b == 0:
            raise ExceptionalLocus("zero denominator mod p")
        return a * pow(b, -1, self.modulus) % self.modulus

    def _laurent(self, L, v):
        """v * L(v) = c[-1] + c[0] v + c[1] v^2."""
        if self.modulus is not None:
            return (int(L.cm1) + int(L.c0) * v + int(L.c1) * v * v) % self.modulus
        return L.cm1 + L.c0 * v + L.c1 * v * v

    def i1(self, x, y):
        num = self._laurent(self.A[-1], x)
        den = self._laurent(self.A[1], x) * y
        return x, self._div(num, den)

    def i2(self, x, y):
        num = self._laurent(self.B[-1], y)
        den = self._laurent(self.B[1], y) * x
        return self._div(num, den), y

    def f(self, x, y):
        return self.i2(*self.i1(x, y))

    def f_inv(self, x, y):
        return self.i1(*self.i2(x, y))


def _reduce(v: Fraction, p: int) -> int:
    if v.denominator % p == 0:
        raise ExceptionalLocus("sample denominator divisible by p")
    return v.numerator * pow(v.denominator, -1, p) % p


def _sample(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9) or 1, rng.randint(1, 9))


def _orbit_period(pair: BirationalPair, modp: BirationalPair, p0, bound: int) -> int | None:
    """Least n <= bound with f^n(p0) = p0, exact up to EXACT_STEPS then mod a prime."""
    x, y = p0
    for n in range(1, min(bound, EXACT_STEPS) + 1):
        x, y = pair.f(x, y)
        if (x, y) == p0:
            return n
    if bound <= EXACT_STEPS:
        return None
    m = modp.modulus
    start = (_reduce(p0[0], m), _reduce(p0[1], m))
    xm, ym = _reduce(x, m), _reduce(y, m)
    for n in range(EXACT_STEPS + 1, bound + 1):
        xm, ym = modp.f(xm, ym)
        if (xm, ym) == start:
            return n
    return None


def symbolic_power_is_identity(D: StepSet, n: int, cap: int = DEGREE_CAP) -> bool | None:
    """f^n == id as rational maps; None if an intermediate degree exceeds ``cap``."""
    pair = BirationalPair(D)
    ctx = BiRat.context(("x", "y"))
    x, y = BiRat.gen(ctx, "x"), BiRat.gen(ctx, "y")
    X, Y = x, y
    for _ in range(n):
        X, Y = pair.f(X, Y)
        if max(X.degree(), Y.degree()) > cap:
            return None
    return X == x and Y == y


def group_order(D: StepSet, bound: int = DEFAULT_GROUP_BOUND, samples: int = DEFAULT_SAMPLES, seed: int = 0):
    """Finite(2 ord f) or InfiniteUpTo(bound), with Finite confirmed symbolically."""
    pair = BirationalPair(D)
    modp = BirationalPair(D, MODULUS)
    rng = random.Random(seed)
    periods = []
    attempts = 0
    while len(periods) < samples:
        attempts += 1
        if attempts > 50 * samples:
            raise RuntimeError("sample points keep hitting the exceptional locus")
        p0 = (_sample(rng), _sample(rng))
        try:
            periods.append(_orbit_period(pair, modp, p0, bound))
        except ExceptionalLocus:
            continue
    if any(n is None for n in periods):
        return InfiniteUpTo(bound)
    n = 1
    for k in periods:
        n = n * k // gcd(n, k)
    if n > bound:
        return InfiniteUpTo(bound)
    ok = symbolic_power_is_identity(D, n)
    if ok is None:
        return InfiniteUpTo(bound, "degree cap exceeded")
    if not ok:
        return InfiniteUpTo(bound, "symbolic confirmation failed")
    return Finite(2 * n)

