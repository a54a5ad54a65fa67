from fractions import Fraction

import math

import numpy as np
import pytest

from nonint.exactalg import I, FieldElement
from nonint.frobenius import (
    FrobeniusError, closed_form_c1, frobenius_basis, local_exponents, local_monodromy,
    log_coefficients, numeric_consistency,
)
from nonint.model import MassParameters, derive_constants, spectral_data
from nonint.monodromy import unipotent_structure

from conftest import PAIRS, PAIR_IDS, grid_masses

ONE = Fraction(1)
LOG_PAIRS = PAIRS + [(Fraction(1, 3), Fraction(2, 3))]


def test_exponents_on_grid(system):
    for m in grid_masses():
        s = system(m.alpha, m.beta)
        assert sorted(local_exponents(s, "t0").values) == [-1, -1, 0, 0]
        assert sorted(local_exponents(s, "t1").values) == [-2, -1, 0, 1]
        assert sorted(local_exponents(s, "t2").values) == [-2, -1, 0, 1]


def test_exponents_at_infinity(system):
    m = MassParameters(Fraction(1, 2), 1)
    sd = spectral_data(m)
    got = np.sort(np.array(local_exponents(system(m.alpha, m.beta), "inf").values, dtype=complex))
    want = np.sort(np.array([sd.lambda1, sd.lambda2, 3 - sd.lambda1, 3 - sd.lambda2], dtype=complex))
    assert np.abs(got - want).max() < 1e-10


def test_basis_argument_checks(system):
    s = system(ONE, ONE)
    with pytest.raises(FrobeniusError):
        frobenius_basis(s, "inf")
    with pytest.raises(FrobeniusError):
        frobenius_basis(s, "t1", order=3)


@pytest.mark.parametrize("ab", PAIRS, ids=PAIR_IDS)
def test_t0_log_free(basis, ab):
    e = basis(*ab, pole="t0")
    assert e.log_solutions == []
    assert all(k == 0 for *_, k in e.obstructions)
    assert local_monodromy(e).is_identity()


@pytest.mark.parametrize("ab", PAIRS, ids=PAIR_IDS)
def test_t1_log_pattern(basis, ab):
    e = basis(*ab)
    # second and fourth solutions (exponents 0 and -2) carry logarithms
    assert e.log_solutions == [1, 3]
    assert [sol.exponent for sol in e.solutions] == [1, 0, -1, -2]


@pytest.mark.parametrize("pole", ["t0", "t1"])
def test_residual_vanishes_exactly(basis, pole):
    e = basis(ONE, ONE, pole=pole)
    for k in range(4):
        assert e.residual_vanishes(k, through=e.order - 2)


def test_closed_form_c1_equal_masses():
    assert closed_form_c1(MassParameters(1, 1)) == Fraction(9, 4)


@pytest.mark.parametrize("ab", LOG_PAIRS)
def test_log_constants(basis, ab):
    m = MassParameters(*ab)
    lc = log_coefficients(basis(*ab), m)
    assert lc.C2 == I * lc.C1 and lc.c2_is_i_c1
    assert lc.c1_nonzero and lc.C1 != 0
    S2 = derive_constants(m).S2
    assert lc.ratio == S2 ** 3
    assert lc.monic_ratio == Fraction(1, 2)


def test_log_constants_equal_masses_values(basis):
    lc = log_coefficients(basis(ONE, ONE), MassParameters(1, 1))
    assert lc.C1 == Fraction(243, 4)
    assert lc.C3 == -243 * I / 2


def test_local_monodromy_positions(basis):
    e = basis(ONE, ONE)
    lc = log_coefficients(e, MassParameters(1, 1))
    M = local_monodromy(e).numeric()
    two_pi_i = 2j * math.pi
    expected = np.eye(4, dtype=complex)
    expected[0, 1] = two_pi_i * complex(lc.C1)
    expected[2, 3] = two_pi_i * complex(lc.C2)
    expected[0, 3] = two_pi_i * complex(lc.C3)
    assert np.abs(M - expected).max() < 1e-12 * np.abs(expected).max()
    assert unipotent_structure(M).blocks == [2, 2]
    assert np.abs(np.linalg.eigvals(M) - 1).max() < 1e-12


def test_series_match_numeric_integration(system):
    r = numeric_consistency(system(Fraction(1, 2), ONE), "t1")
    assert r.passed


def test_expansion_evaluate_is_solution(basis, system):
    # finite-difference check of dY/dt = M(t) Y at a point inside the disc
    from nonint.fuchsian import rhs

    e = basis(ONE, ONE)
    s = system(ONE, ONE)
    t = complex(e.pole_value) + 0.05 * np.exp(0.3j)
    h = 1e-5
    Y = e.evaluate(t)
    dY = (e.evaluate(t + h) - e.evaluate(t - h)) / (2 * h)
    assert np.abs(dY - rhs(s, t) @ Y).max() < 1e-5 * np.abs(dY).max()


def test_field_element_coefficients(basis):
    # leading coefficient of the exponent-1 solution at log level 0
    e = basis(ONE, ONE)
    c = e.coefficient(0, 0, 1)
    assert all(isinstance(x, FieldElement) for x in c) and any(not x.is_zero() for x in c)
