"""Walk counting by dynamic programming and the functional-equation check."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

from .walkcat import STEPS, StepSet


@dataclass(frozen=True)
class CountTable:
    """q[(i, j, k)]: number of quadrant walks from (0,0) to (i,j) in k steps."""

    order: int
    entries: dict

    def q(self, i: int, j: int, k: int) -> int:
        return self.entries.get((i, j, k), 0)

    def level(self, k: int) -> dict[tuple[int, int], int]:
        return {(i, j): v for (i, j, kk), v in self.entries.items() if kk == k}

    def total(self, k: int) -> int:
        return sum(self.level(k).values())


def count_walks(D: StepSet, N: int) -> CountTable:
    if N < 0:
        raise ValueError("order must be nonnegative")
    D.require_unweighted()
    steps = sorted(D.steps)
    entries = {(0, 0, 0): 1}
    frontier = {(0, 0): 1}
    for k in range(N):
        nxt: dict = defaultdict(int)
        for (i, j), v in frontier.items():
            for a, b in steps:
                if i + a >= 0 and j + b >= 0:
                    nxt[(i + a, j + b)] += v
        frontier = dict(nxt)
        for (i, j), v in frontier.items():
            entries[(i, j, k + 1)] = v
    return CountTable(N, entries)


def functional_equation_residual(D: StepSet, table: CountTable) -> dict:
    """Nonzero coefficients of K*Q - (xy - F1 - F2 + t d[-1,-1] Q(0,0,t)).

    Keys are (a, b, k) for x^a y^b t^k, for k up to the table order.
    F1 = t x A[-1](x) Q(x,0,t), F2 = t y B[-1](y) Q(0,y,t).
    """
    N = table.order
    res: dict = defaultdict(int)
    for (i, j, k), v in table.entries.items():
        res[(i + 1, j + 1, k)] += v
        if k + 1 <= N:
            for a, b in STEPS:
                w = D.d(a, b)
                if w:
                    res[(i + a + 1, j + b + 1, k + 1)] -= int(w) * v
    res[(1, 1, 0)] -= 1
    for (i, j, k), v in table.entries.items():
        if k + 1 > N:
            continue
        if j == 0:
            for a in (-1, 0, 1):
                w = D.d(a, -1)
                if w:
                    res[(i + a + 1, 0, k + 1)] += int(w) * v
        if i == 0:
            for b in (-1, 0, 1):
                w = D.d(-1, b)
                if w:
                    res[(0, j + b + 1, k + 1)] += int(w) * v
        if i == 0 and j == 0 and D.d(-1, -1):
            res[(0, 0, k + 1)] -= int(D.d(-1, -1)) * v
    return {key: v for key, v in res.items() if v}


def check_functional_equation(D: StepSet, N: int = 12) -> dict:
    """Residual of the kernel functional equation through t^N (empty if exact)."""
    if N < 1:
        raise ValueError("order must be at least 1")
    return functional_equation_residual(D, count_walks(D, N))
