from itertools import product

import pytest

from qpwalk.series import check_functional_equation, count_walks
from qpwalk.walkcat import catalog, lookup


def brute_force_counts(D, N):
    """Enumerate every step word and keep those that stay in the quadrant."""
    steps = sorted(D.steps)
    totals = [0] * (N + 1)
    excursions = [0] * (N + 1)
    for n in range(N + 1):
        for word in product(steps, repeat=n):
            i = j = 0
            ok = True
            for a, b in word:
                i, j = i + a, j + b
                if i < 0 or j < 0:
                    ok = False
                    break
            if ok:
                totals[n] += 1
                excursions[n] += (i, j) == (0, 0)
    return totals, excursions


@pytest.mark.parametrize("label", ["FG.9", "FG.2", "FG.4", "IIC.5", "IA.1", "SG.1", "III"])
def test_dp_agrees_with_enumeration(label):
    D = lookup(label)
    N = 6
    table = count_walks(D, N)
    totals, excursions = brute_force_counts(D, N)
    assert [table.total(k) for k in range(N + 1)] == totals
    assert [table.q(0, 0, k) for k in range(N + 1)] == excursions


@pytest.mark.parametrize("grid, excursions", [
    # simple walk: products of Catalan numbers
    ("010/101/010", [1, 0, 2, 0, 10, 0, 70, 0, 588]),
    # Kreweras
    ("001/100/010", [1, 0, 0, 2, 0, 0, 16, 0, 0]),
    # Gessel
    ("001/101/100", [1, 0, 2, 0, 11, 0, 85, 0, 782]),
])
def test_known_excursion_counts(grid, excursions):
    table = count_walks(lookup(grid), len(excursions) - 1)
    assert [table.q(0, 0, k) for k in range(len(excursions))] == excursions


@pytest.mark.parametrize("D", catalog(), ids=lambda D: D.label)
def test_functional_equation_exact_through_order_12(D):
    assert check_functional_equation(D, 12) == {}


def test_order_must_be_positive():
    with pytest.raises(ValueError):
        check_functional_equation(lookup("FG.1"), 0)


def test_first_step_of_ia1():
    table = count_walks(lookup("IA.1"), 1)
    assert table.level(1) == {(1, 1): 1}
    assert table.level(0) == {(0, 0): 1}


@pytest.mark.parametrize("label", ["IA.1", "IIC.5", "FG.9"])
def test_totals_bounded_by_step_count(label):
    D = lookup(label)
    table = count_walks(D, 8)
    assert all(table.total(k) <= len(D.steps) ** k for k in range(9))


@pytest.mark.parametrize("label", ["IIB.7", "IA.3", "FG.14"])
def test_swap_transposes_counts(label):
    from qpwalk.walkcat import swap_xy

    D = lookup(label)
    a, b = count_walks(D, 7), count_walks(swap_xy(D), 7)
    assert {(j, i, k): v for (i, j, k), v in a.entries.items()} == b.entries


def test_corrupted_table_leaves_a_residual():
    from qpwalk.series import CountTable, functional_equation_residual

    D = lookup("IA.1")
    table = count_walks(D, 6)
    entries = dict(table.entries)
    key = next(k for k in entries if k[2] == 4)
    entries[key] += 1
    assert functional_equation_residual(D, CountTable(6, entries)) != {}
