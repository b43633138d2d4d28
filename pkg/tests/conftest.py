from functools import lru_cache

import pytest

from qpwalk.walkcat import catalog, lookup

W_MODELS = [D for D in catalog() if not D.finite_group and not D.singular]
W_LABELS = [D.label for D in W_MODELS]
GENERIC_PREFIXES = ("IA.", "IB.", "IC.", "IIA.")
GENERIC_LABELS = [l for l in W_LABELS if l.startswith(GENERIC_PREFIXES)]
NONGENERIC_LABELS = [l for l in W_LABELS if not l.startswith(GENERIC_PREFIXES)]


@lru_cache(maxsize=None)
def b_pair(label):
    from qpwalk.funcfield import b_functions

    return b_functions(lookup(label))


@lru_cache(maxsize=None)
def b2_divisor(label):
    from qpwalk.funcfield import polar_divisor

    return polar_divisor(b_pair(label)[1])


@lru_cache(maxsize=None)
def b2_verdict(label):
    from qpwalk.funcfield import telescoper_exists

    return telescoper_exists(b_pair(label)[1], div=b2_divisor(label))


@lru_cache(maxsize=None)
def report(label):
    from qpwalk.classify import classify

    return classify(lookup(label))


@pytest.fixture
def model():
    return lookup
