from fractions import Fraction

import math

import pytest

from nonint.exactalg import I, SQRT3, FieldElement
from nonint.model import (
    MassError, MassParameters, derive_constants, lagrange_coefficients, resonance_scan,
    singular_points, spectral_data, theta,
)

from conftest import grid_masses


def test_mass_validation():
    assert MassParameters("0.1", "1/5").alpha == Fraction(1, 10)
    for a, b in [(3, 1), (Fraction(1, 2), Fraction(1, 3)), (0, 1), (1, 2), (-1, 1)]:
        with pytest.raises(MassError):
            MassParameters(a, b)


def test_derived_constants():
    d = derive_constants(MassParameters(1, 1))
    assert (d.S1, d.S2, d.S3) == (3, 3, 3)
    d = derive_constants(MassParameters(Fraction(1, 2), 1))
    assert (d.S1, d.S2, d.S3) == (Fraction(5, 2), 2, 3)


def test_lagrange_coefficients_equal_masses():
    lc = lagrange_coefficients(MassParameters(1, 1), 1)
    assert lc.cA == 0 and lc.cB == -SQRT3 / 3 and lc.cC == 2 * SQRT3 / 3 and lc.cD == Fraction(-1, 3)
    assert lc.ea == 2 and lc.eb == -2 * SQRT3 / 3 and lc.ec == -3 and lc.ed == Fraction(2, 3)
    assert tuple(lc.lpoly) == (6, -SQRT3)
    assert tuple(lc.zpoly) == (9, -3 * SQRT3, 3)


def test_k_must_be_nonzero():
    with pytest.raises(ValueError, match="collision"):
        lagrange_coefficients(MassParameters(1, 1), 0)


def test_singular_points():
    sp = singular_points(MassParameters(1, 1))
    assert sp.t0 == SQRT3 / 6 and sp.t1 == SQRT3 / 6 + I / 2
    assert complex(sp.t0) == pytest.approx(0.2886751, abs=1e-7)
    sp = singular_points(MassParameters(Fraction(1, 2), 1))
    assert sp.t0 == SQRT3 / 8 and sp.t1 == SQRT3 / 8 + 3 * I / 8
    for m in grid_masses():
        sp = singular_points(m)
        assert sp.t2 == sp.t1.conjugate()


def test_spectral_data_values():
    sd = spectral_data(MassParameters(1, 1))
    assert sd.theta == 0
    assert sd.lambda1 == sd.lambda2 == pytest.approx((3 + math.sqrt(13)) / 2)
    sd = spectral_data(MassParameters(Fraction(1, 2), 1))
    assert sd.theta == Fraction(576, 100)
    assert sd.lambda1 == pytest.approx(3.4621, abs=1e-4)
    assert sd.lambda2 == pytest.approx(3.1279, abs=1e-4)


def test_theta_bound_on_grid():
    for m in grid_masses():
        assert 0 <= theta(m) < 144
        assert spectral_data(m).bound_ok


def test_theta_symmetric_in_masses():
    for a, b in [(Fraction(1, 3), Fraction(2, 3)), (Fraction(1, 7), 1)]:
        S = derive_constants(MassParameters(a, b))
        # S1, S2 are symmetric in alpha, beta; compare with swapped formulas
        assert S.S1 == b + a + 1 and S.S2 == b * a + b + a


def test_resonance_scan():
    rows, none = resonance_scan()
    assert none
    by_r = {row["r"]: row for row in rows}
    assert set(by_r) == set(range(12))
    assert by_r[3]["plus_square"] and not by_r[3]["minus_square"]
    assert by_r[9]["minus_square"] and not by_r[9]["plus_square"]
    assert not any(row["both"] for row in rows)


def test_exponents_at_infinity_sum():
    for m in grid_masses():
        ex = spectral_data(m).exponents_at_infinity()
        assert sum(ex) == pytest.approx(6)
        assert isinstance(FieldElement.coerce(theta(m)), FieldElement)
