from fractions import Fraction

import cmath
import math

import numpy as np
import pytest

from nonint.model import spectral_data, MassParameters
from nonint.monodromy import (
    BACKEND, ClearanceError, Conventions, Line, PathError, PathSpec, base_point, circle_path,
    clustered_eigenvalues, kernel, keyhole, liouville_check, loop_monodromy, loop_path,
    match_multisets, monodromy_rep, spectrum_match, transport, unipotent_structure,
)

ONE, HALF = Fraction(1), Fraction(1, 2)
JORDAN_22 = np.array([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 1], [0, 0, 0, 1]], dtype=complex)


def test_backend_selected():
    assert BACKEND in ("cython", "python")
    assert hasattr(kernel("python"), "integrate_segments")
    assert hasattr(kernel(), "integrate_segments")


def test_path_validation(system):
    s = system(ONE, ONE)
    broken = PathSpec(3j, (Line(3j, 1 + 3j), Line(2 + 3j, 3 + 3j)))
    assert not broken.is_connected()
    with pytest.raises(PathError):
        transport(s, broken)
    t0 = complex(s.numeric()[0][0])
    with pytest.raises(ClearanceError):
        transport(s, PathSpec(t0 - 0.5, (Line(t0 - 0.5, t0 + 0.5),)))


def test_contractible_loop_is_identity(system):
    s = system(HALF, ONE)
    tau = base_point(s)
    # small circle near the base point that encloses no pole
    loop = circle_path(tau + 0.1, 0.1, start_angle=math.pi)
    assert np.abs(transport(s, loop).matrix - np.eye(4)).max() < 1e-9


def test_forward_then_back_is_identity(system):
    s = system(HALF, ONE)
    tau = base_point(s)
    seg = PathSpec(tau, (Line(tau, tau + 0.8j),))
    there = transport(s, seg).matrix
    back = transport(s, seg.reversed(), y0=there).matrix
    assert np.abs(back - np.eye(4)).max() < 1e-10


def test_small_circle_around_t0_identity(system):
    s = system(ONE, ONE)
    t0 = complex(s.numeric()[0][0])
    r = 0.2 * s.min_gap()
    T = transport(s, circle_path(t0, r)).matrix
    assert np.abs(T - np.eye(4)).max() < 1e-8


def test_kernels_agree(system):
    s = system(HALF, ONE)
    path = loop_path(s, 1)
    a = transport(s, path, backend="python").matrix
    b = transport(s, path, backend=BACKEND).matrix
    assert np.abs(a - b).max() < 1e-8 * np.abs(a).max()


@pytest.mark.parametrize("idx", [1, 2])
def test_homotopy_invariance(system, idx):
    s = system(HALF, ONE)
    Ts = [loop_monodromy(s, idx, Conventions(keyhole_fraction=f)) for f in (0.15, 0.3)]
    assert np.abs(Ts[0] - Ts[1]).max() < 1e-8 * np.abs(Ts[0]).max()


def test_base_point_covariance(system):
    # moving the base point along a path with transport P conjugates T by P
    s = system(HALF, ONE)
    tau = base_point(s)
    tau2 = tau + 0.3j
    P = transport(s, PathSpec(tau, (Line(tau, tau2),))).matrix
    T = loop_monodromy(s, 1)
    T2 = loop_monodromy(s, 1, Conventions(base=tau2))
    assert np.abs(T2 - P @ T @ np.linalg.inv(P)).max() < 1e-9 * np.abs(T).max()


def test_liouville(system):
    s = system(HALF, ONE)
    assert liouville_check(s, loop_path(s, 1)) < 1e-9
    tau = base_point(s)
    assert liouville_check(s, PathSpec(tau, (Line(tau, tau + 0.5 - 0.7j),))) < 1e-9


def test_t1_unipotent(rep):
    r = rep(ONE, ONE)
    N = r.T1 - np.eye(4)
    assert np.linalg.norm(N @ N) / np.linalg.norm(N) ** 2 < 1e-8
    assert unipotent_structure(r.T1).ranks[0] == 2
    assert abs(np.linalg.det(r.T1) - 1) < 1e-8


@pytest.mark.parametrize("ab", [(ONE, ONE), (HALF, ONE)], ids=["1-1", "1/2-1"])
def test_representation(rep, ab):
    r = rep(*ab)
    assert np.abs(r.T0 - np.eye(4)).max() < 1e-8
    assert r.relation_residual < 1e-6
    assert max(r.det_errors().values()) < 1e-8
    assert r.metadata["order"] == r.order


def test_jordan_profiles():
    assert unipotent_structure(JORDAN_22).blocks == [2, 2]
    assert unipotent_structure(np.eye(4)).blocks == [1, 1, 1, 1]
    rng = np.random.default_rng(2)
    U = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    assert unipotent_structure(U @ JORDAN_22 @ np.linalg.inv(U)).is_22


def test_jordan_profile_half_half(rep):
    assert unipotent_structure(rep(HALF, HALF).T1).blocks == [2, 2]


def test_spectrum_equal_masses(rep):
    r = rep(ONE, ONE)
    ev = clustered_eigenvalues(r.Tinf)
    # e^{2 pi i lambda} with lambda = (3 + sqrt13)/2, each eigenvalue twice
    z = cmath.exp(1j * math.pi * (3 + math.sqrt(13)))
    assert z == pytest.approx(complex(-0.325555, 0.945523), abs=1e-6)
    for target in (z, z.conjugate()):
        assert sum(abs(e - target) < 1e-6 for e in ev) == 2
    rpt = spectrum_match(r.Tinf, spectral_data(MassParameters(1, 1)))
    assert rpt.passed and rpt.distance_from_identity > 0.1


def test_spectrum_unequal_masses(rep):
    r = rep(HALF, ONE)
    sd = spectral_data(MassParameters(HALF, ONE))
    targets = [cmath.exp(s * 2j * math.pi * l) for l in (sd.lambda1, sd.lambda2) for s in (1, -1)]
    assert match_multisets(clustered_eigenvalues(r.Tinf), targets) < 1e-6


def test_clustered_eigenvalues_defective():
    eps = 1e-12
    T = JORDAN_22.copy()
    T[1, 0] = eps  # eigenvalues split like sqrt(eps)
    assert np.abs(clustered_eigenvalues(T) - 1).max() < 1e-10


def test_balanced_basis_is_exact_conjugation(rep):
    r = rep(Fraction(1, 10), Fraction(1, 5))
    d = np.asarray(r.metadata["basis_scaling"], dtype=float)
    assert np.all(np.log2(d) == np.round(np.log2(d)))
    assert r.relation_residual < 1e-6


def test_keyhole_is_closed(system):
    s = system(HALF, ONE)
    tau = base_point(s)
    p = keyhole(tau, complex(s.numeric()[0][1]), 0.1)
    assert p.is_closed() and p.is_connected()


def test_pure_python_fallback_selected():
    import os
    import subprocess
    import sys

    env = dict(os.environ, NONINT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import nonint.monodromy as m; print(m.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
