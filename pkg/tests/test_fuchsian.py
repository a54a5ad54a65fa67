from fractions import Fraction

import numpy as np
import pytest

from nonint.dynamics import fuchsian_transform
from nonint.exactalg import MultiPoly, charpoly
from nonint.fuchsian import (
    TABLE, a_infinity, ainf_eigenvalues, contour_residue, derivation_crosscheck,
    provenance, residue_matrices, rhs, structural_checks, table_matrix,
)
from nonint.model import MassParameters, spectral_data

from conftest import PAIRS, PAIR_IDS, grid_masses

EQUAL = MassParameters(1, 1)


def test_table_entries_equal_masses():
    A = table_matrix("A", EQUAL)
    assert A.rows[0][0] == -1 and A.rows[0][2] == Fraction(2, 81)
    assert table_matrix("R", EQUAL).rows[0][0] == -2
    assert table_matrix("J", EQUAL).rows[0][0] == 0
    assert "S1" in provenance("A", 1, 3)


def test_sqrt3_positions_follow_table():
    m = MassParameters(Fraction(2, 7), Fraction(1, 3))
    A = table_matrix("A", m)
    for (i, j), formula in TABLE["A"].items():
        e = A.rows[i - 1][j - 1]
        assert ("r3" in formula) == (e.b != 0 or e.d != 0), (i, j)


@pytest.mark.parametrize("ab", [(1, 1), (Fraction(1, 3), Fraction(2, 3))])
def test_structural_checks_pass(ab):
    rep = structural_checks(residue_matrices(MassParameters(*ab)))
    assert rep.passed and rep.A_ok and rep.BC_ok and rep.trace_Ainf == 6


def test_c_is_conjugate_of_b_on_grid():
    for m in grid_masses():
        s = residue_matrices(m)
        assert s.resC == s.resB.conjugate()


def test_ainf_equal_masses_diagonal():
    Ainf = a_infinity(residue_matrices(EQUAL))
    assert [Ainf.rows[i][i] for i in range(4)] == [5, 2, -2, 1]
    assert Ainf.trace() == 6


def test_ainf_trace_on_grid():
    for m in grid_masses():
        assert a_infinity(residue_matrices(m)).trace() == 6


def test_ainf_charpoly_reflection_symmetry():
    # the root set is closed under l -> 3 - l
    for m in [EQUAL, MassParameters(Fraction(1, 2), 1), MassParameters(Fraction(1, 5), Fraction(3, 5))]:
        p = charpoly(a_infinity(residue_matrices(m)))
        reflected = p.subs({"l": 3 - MultiPoly.var("l")})
        assert reflected == p


def test_ainf_eigenvalues_match_spectral_data():
    for m in grid_masses():
        sd = spectral_data(m)
        target = np.sort_complex(np.array([sd.lambda1, sd.lambda2, 3 - sd.lambda1, 3 - sd.lambda2],
                                          dtype=complex))
        assert np.abs(np.sort_complex(ainf_eigenvalues(residue_matrices(m))) - target).max() < 1e-10


def test_rhs_real_on_real_axis():
    s = residue_matrices(MassParameters(Fraction(1, 2), 1))
    for t in (-1.3, 0.05, 2.7):
        assert np.abs(rhs(s, t).imag).max() < 1e-12 * np.abs(rhs(s, t)).max()


def test_rhs_decay_at_infinity():
    s = residue_matrices(MassParameters(Fraction(1, 2), 1))
    Ainf = a_infinity(s).to_numpy()
    t = 1e6
    assert np.abs(t * rhs(s, t) + Ainf).max() < 1e-5


def test_rhs_regression_value():
    # at t = t0 + 1 the matrix is A + 1.6 (R - J/2) for equal masses
    s = residue_matrices(EQUAL)
    t = complex(s.numeric()[0][0]) + 1
    M = rhs(s, t)
    frozen = {(0, 0): -4.2, (0, 2): 2 / 81, (2, 0): -291.6, (3, 1): 81.0, (2, 3): 1.6}
    for (i, j), v in frozen.items():
        assert M[i, j] == pytest.approx(v, rel=1e-12)
    A, R, J = (x.to_numpy() for x in (s.resA, s.R, s.J))
    assert np.abs(M - (A + 1.6 * (R - J / 2))).max() < 1e-10


def test_contour_residue_of_oracle():
    s = residue_matrices(EQUAL)
    poles, res = s.numeric()
    radius = 0.3 * s.min_gap()
    got = contour_residue(lambda t: fuchsian_transform(t, EQUAL), poles[0], radius)
    assert np.abs(got - res[0]).max() < 1e-7 * max(1, np.abs(res[0]).max())


@pytest.mark.parametrize("ab", PAIRS, ids=PAIR_IDS)
def test_derivation_crosscheck_pairs(ab):
    r = derivation_crosscheck(MassParameters(*ab))
    assert r.passed and r.samples == 20
    assert r.max_deviation < 1e-6 and r.max_balanced_deviation < 1e-6


def test_crosscheck_negative_control_permuted_oracle():
    m = MassParameters(Fraction(1, 2), 1)
    perm = [1, 0, 3, 2]

    def permuted(t):
        return fuchsian_transform(t, m)[np.ix_(perm, perm)]

    assert not derivation_crosscheck(m, oracle=permuted).passed
