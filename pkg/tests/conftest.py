"""Shared fixtures; expensive objects are built once per session."""

from fractions import Fraction

import pytest

from nonint.model import MassParameters

# mass pairs used throughout: symmetric, one unequal ratio, and a small-mass pair
PAIRS = [(Fraction(1), Fraction(1)), (Fraction(1, 2), Fraction(1)),
         (Fraction(1, 10), Fraction(1, 5))]
PAIR_IDS = ["1-1", "1/2-1", "1/10-1/5"]


def grid_masses(n=5):
    vals = [Fraction(i, n) for i in range(1, n + 1)]
    return [MassParameters(a, b) for a in vals for b in vals if a <= b]


_cache = {}


def cached(key, build):
    if key not in _cache:
        _cache[key] = build()
    return _cache[key]


@pytest.fixture(scope="session")
def system():
    from nonint.fuchsian import residue_matrices

    return lambda a, b: cached(("sys", a, b), lambda: residue_matrices(MassParameters(a, b)))


@pytest.fixture(scope="session")
def rep(system):
    from nonint.monodromy import monodromy_rep

    return lambda a, b: cached(("rep", a, b), lambda: monodromy_rep(system(a, b)))


@pytest.fixture(scope="session")
def basis(system):
    from nonint.frobenius import frobenius_basis

    return lambda a, b, pole="t1": cached(
        ("frob", a, b, pole), lambda: frobenius_basis(system(a, b), pole, 30))


@pytest.fixture(scope="session")
def certificate():
    from nonint.obstruction import certify

    return lambda a, b: cached(("cert", a, b), lambda: certify(MassParameters(a, b)))
