"""Walk models: step sets, the 79-model catalog, kernels and decompositions.

A step set is written as a three-row grid string read top to bottom
(y-step +1, 0, -1) and left to right (x-step -1, 0, +1), e.g. ``"101/000/011"``
for the steps NW, NE, S, SE.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

from .exactnum import RATFUNC_ZERO, RatFunc, T

STEPS = tuple((i, j) for j in (1, 0, -1) for i in (-1, 0, 1))


@dataclass(frozen=True)
class StepSet:
    """Indicator weights d[i, j] for i, j in {-1, 0, 1}, plus catalog metadata.

    ``weights`` lists d in grid order (rows j = 1, 0, -1; columns i = -1, 0, 1).
    Metadata fields are ignored by equality and hashing.
    """

    weights: tuple[Fraction, ...]
    label: str | None = field(default=None, compare=False)
    finite_group: bool | None = field(default=None, compare=False)
    singular: bool | None = field(default=None, compare=False)
    exceptional: bool | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.weights) != 9:
            raise ValueError("a step set has nine weights")
        w = tuple(Fraction(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if w[4] != 0:
            raise ValueError("the zero step (0,0) is not allowed")
        if all(x == 0 for x in w):
            raise ValueError("empty step set")
        if any(x < 0 for x in w):
            raise ValueError("negative step weight")

    @classmethod
    def from_steps(cls, steps, label: str | None = None) -> "StepSet":
        s = set(steps)
        return cls(tuple(1 if st in s else 0 for st in STEPS), label)

    @classmethod
    def from_grid(cls, grid: str, label: str | None = None) -> "StepSet":
        rows = grid.strip().split("/")
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError(f"malformed grid string {grid!r}")
        if not all(ch.isdigit() for r in rows for ch in r):
            raise ValueError(f"grid entries must be digits: {grid!r}")
        return cls(tuple(int(ch) for r in rows for ch in r), label)

    def d(self, i: int, j: int) -> Fraction:
        return self.weights[(1 - j) * 3 + (i + 1)]

    @property
    def grid(self) -> str:
        w = ["%d" % x if x.denominator == 1 and x < 10 else "?" for x in self.weights]
        return "/".join("".join(w[r * 3:(r + 1) * 3]) for r in range(3))

    @property
    def steps(self) -> frozenset[tuple[int, int]]:
        return frozenset(s for s, w in zip(STEPS, self.weights) if w != 0)

    @property
    def name(self) -> str:
        return self.label or self.grid

    def is_unweighted(self) -> bool:
        return all(w in (0, 1) for w in self.weights)

    def require_unweighted(self) -> None:
        if not self.is_unweighted():
            raise ValueError(f"weighted step set {self.grid} is not supported")

    def is_symmetric(self) -> bool:
        return all(self.d(i, j) == self.d(j, i) for i, j in STEPS)

    def with_label(self, label: str | None) -> "StepSet":
        return replace(self, label=label)


def swap_xy(D: StepSet) -> StepSet:
    """Exchange the roles of x and y: d'[i, j] = d[j, i]."""
    return StepSet(tuple(D.d(j, i) for i, j in STEPS), None)


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class KernelPoly:
    """K(x, y) = xy - t * sum d[i,j] x^(i+1) y^(j+1) and its bihomogenization.

    ``K`` maps (a, b) to the coefficient of x^a y^b.  ``Kbar`` maps
    (i, j) to the coefficient of x0^i x1^(2-i) y0^j y1^(2-j).
    """

    K: dict
    Kbar: dict

    def eval_K(self, x, y):
        return sum((c * x**a * y**b for (a, b), c in self.K.items()), RATFUNC_ZERO)

    def eval_Kbar(self, x0, x1, y0, y1):
        return sum((c * x0**i * x1 ** (2 - i) * y0**j * y1 ** (2 - j)
                    for (i, j), c in self.Kbar.items()), RATFUNC_ZERO)

    def bidegree(self) -> tuple[int, int]:
        xs = [a for (a, b), c in self.K.items() if not c.is_zero()]
        ys = [b for (a, b), c in self.K.items() if not c.is_zero()]
        return max(xs), max(ys)


def kernel(D: StepSet) -> KernelPoly:
    K: dict = {}
    Kbar: dict = {}
    for i in range(3):
        for j in range(3):
            c = -T * D.d(i - 1, j - 1)
            if i == 1 and j == 1:
                c = c + 1
            if not c.is_zero():
                Kbar[(i, j)] = c
                K[(i, j)] = c
    return KernelPoly(K, Kbar)


def fiber_matrix(D: StepSet) -> tuple[tuple[RatFunc, ...], ...]:
    """h[i][j] with Kbar = -t * sum h[i][j] x0^i x1^(2-i) y0^j y1^(2-j).

    h[i][j] = d[i-1, j-1] except h[1][1] = -1/t.
    """
    rows = []
    for i in range(3):
        row = []
        for j in range(3):
            if i == 1 and j == 1:
                row.append(-1 / T)
            else:
                row.append(RatFunc(D.d(i - 1, j - 1)))
        rows.append(tuple(row))
    return tuple(rows)


# ---------------------------------------------------------------------------
# decomposition of the step polynomial
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Laurent1:
    """c[-1]/v + c[0] + c[1] v with rational coefficients."""

    cm1: Fraction
    c0: Fraction
    c1: Fraction

    def __call__(self, v):
        return self.cm1 / v + self.c0 + self.c1 * v

    def coeffs(self) -> dict[int, Fraction]:
        return {-1: self.cm1, 0: self.c0, 1: self.c1}

    def is_zero(self) -> bool:
        return self.cm1 == self.c0 == self.c1 == 0


@dataclass(frozen=True)
class Decomposition:
    A: dict[int, Laurent1]
    B: dict[int, Laurent1]


def decompose(D: StepSet) -> Decomposition:
    """S = A[-1](x)/y + A[0](x) + A[1](x) y = B[-1](y)/x + B[0](y) + B[1](y) x."""
    A = {k: Laurent1(D.d(-1, k), D.d(0, k), D.d(1, k)) for k in (-1, 0, 1)}
    B = {k: Laurent1(D.d(k, -1), D.d(k, 0), D.d(k, 1)) for k in (-1, 0, 1)}
    return Decomposition(A, B)


def step_polynomial(D: StepSet, x, y):
    return sum(D.d(i, j) * x**i * y**j for i, j in STEPS if D.d(i, j))


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------

# The 51 nonsingular infinite-group models, labeled by family.  The second of
# two pictures sharing the label IA.8 is called IA.8b.
_W = """
IA.1 101/000/011
IA.2 111/000/011
IA.3 111/100/001
IA.4 101/100/011
IA.5 111/101/001
IA.6 111/001/101
IA.7 111/100/011
IA.8 111/100/101
IA.8b 101/100/111
IA.9 111/101/011
IB.1 101/000/110
IB.2 101/100/010
IB.3 111/000/110
IB.4 111/100/010
IB.5 101/100/110
IB.6 111/100/110
IC.1 111/001/100
IC.2 111/001/010
IC.3 111/101/110
IIA.1 011/000/101
IIA.2 011/100/001
IIA.3 011/100/101
IIA.4 011/000/111
IIA.5 011/001/111
IIA.6 011/101/101
IIA.7 011/100/111
IIB.1 010/001/110
IIB.2 010/001/101
IIB.3 010/101/001
IIB.4 010/101/011
IIB.5 010/101/110
IIB.6 010/001/111
IIB.7 110/001/011
IIB.8 110/001/101
IIB.9 110/101/101
IIB.10 110/101/111
IIC.1 011/100/010
IIC.2 011/100/110
IIC.3 011/001/100
IIC.4 011/101/100
IIC.5 011/101/010
IID.1 010/100/011
IID.2 010/100/101
IID.3 110/000/101
IID.4 110/100/001
IID.5 010/100/111
IID.6 110/000/111
IID.7 110/100/011
IID.8 110/100/101
IID.9 110/100/111
III 001/100/110
"""

EXCEPTIONAL_LABELS = frozenset(
    ["IIB.1", "IIB.2", "IIC.1", "IIB.3", "IIC.4", "IIC.2", "IIB.6", "IIC.5", "IIB.7"]
)

# Finite-group models (FG.*) and singular infinite-group models (SG.*), one
# representative per x/y swap class.
_OTHERS = """
FG.1 001/100/001
FG.2 001/100/010
FG.3 001/101/001
FG.4 001/101/100
FG.5 010/000/101
FG.6 010/000/111
FG.7 010/001/100
FG.8 010/100/001
FG.9 010/101/010
FG.10 010/101/101
FG.11 010/101/111
FG.12 011/100/011
FG.13 011/101/011
FG.14 011/101/110
FG.15 100/101/001
FG.16 101/000/101
FG.17 101/000/111
FG.18 101/001/101
FG.19 101/101/101
FG.20 101/101/111
FG.21 110/101/011
FG.22 111/001/111
FG.23 111/101/111
SG.1 100/001/001
SG.2 101/000/001
SG.3 101/001/001
SG.4 110/001/001
SG.5 111/001/001
"""


def _parse_table(text: str):
    for line in text.strip().splitlines():
        label, grid = line.split()
        yield label, grid


@lru_cache(maxsize=1)
def catalog() -> tuple[StepSet, ...]:
    """The 79 models, flagged with group finiteness, singularity and label."""
    out = []
    for label, grid in _parse_table(_W):
        out.append(replace(StepSet.from_grid(grid), label=label, finite_group=False,
                           singular=False, exceptional=label in EXCEPTIONAL_LABELS))
    for label, grid in _parse_table(_OTHERS):
        fin = label.startswith("FG.")
        out.append(replace(StepSet.from_grid(grid), label=label, finite_group=fin,
                           singular=not fin, exceptional=False))
    return tuple(out)


@lru_cache(maxsize=1)
def _by_label() -> dict[str, StepSet]:
    return {D.label: D for D in catalog()}


def lookup(name: str) -> StepSet:
    """A catalog model by label, or a catalog model (or swap) by grid string.

    Grid strings that match no catalog entry up to x/y swap are returned
    unlabeled; the classifier treats them as unclassified input.
    """
    table = _by_label()
    if name in table:
        return table[name]
    D = StepSet.from_grid(name)
    return find_in_catalog(D) or D


def find_in_catalog(D: StepSet) -> StepSet | None:
    """The catalog entry equal to D, carrying D's orientation, else None."""
    S = swap_xy(D)
    for E in catalog():
        if E == D:
            return E
        if E == S:
            return replace(D, label=E.label + "↔", finite_group=E.finite_group,
                           singular=E.singular, exceptional=E.exceptional)
    return None
