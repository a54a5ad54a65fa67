"""The Lagrangian parabolic orbit, Whittaker's energy-level reduction and the
normal variational equations derived from it by automatic differentiation.

This is the independent route to the Fuchsian coefficient matrix: nothing
here uses the closed-form residue tables.
"""

from __future__ import annotations

from types import SimpleNamespace

import numpy as np
from scipy.integrate import solve_ivp

from ..exactalg import FieldElement, field_eval
from ..model import MassParameters, lagrange_coefficients, singular_points
from . import jet
from .mechanics import (
    Branches,
    ReducedState,
    TransverseState,
    hamiltonian_reduced,
    p1_quadratic,
    reduced_vector_field,
)


class SingularPointError(ValueError):
    """The requested point is (numerically) one of the orbit's singular points."""


class BranchPointError(ValueError):
    """The discriminant of the p1 quadratic vanishes."""


def _numeric_coeffs(lc):
    return SimpleNamespace(**{
        name: (tuple(field_eval(c) for c in val) if isinstance(val, tuple) else field_eval(val))
        for name, val in vars(lc).items()
    })


def _coefficients(m, k, exact):
    lc = lagrange_coefficients(m, k)
    return lc if exact else _numeric_coeffs(lc)


def _check_regular(w, m, k, clearance=1e-9):
    if isinstance(w, FieldElement):
        sp = singular_points(m, k)
        if w in (sp.w2, sp.w3, sp.w4):
            raise SingularPointError(f"w = {w} is a singular point of the orbit")
        return
    wv = jet.value(w)
    sp = singular_points(m, k)
    for name, s in (("w2", sp.w2), ("w3", sp.w3), ("w4", sp.w4)):
        if abs(wv - field_eval(s)) <= clearance * max(1.0, abs(field_eval(s))):
            raise SingularPointError(f"w = {wv} coincides with singular point {name}")


def lagrange_orbit(w, m: MassParameters, k=1) -> ReducedState:
    """Point of the parabolic orbit with parameter ``w = p*q``.

    ``w`` may be exact (FieldElement/int/Fraction), complex, or a Jet.
    """
    exact = not isinstance(w, (complex, float, jet.Jet))
    if exact:
        w = FieldElement.coerce(w)
    c = _coefficients(m, k, exact)
    q = -((c.ea * w + c.eb) * w + c.ed) / c.ec
    if (q.is_zero() if exact else abs(jet.value(q)) == 0):
        raise SingularPointError("P(w) = 0: collision-scale singularity")
    p = w / q
    sqrt3 = FieldElement(0, 1) if exact else 3 ** 0.5
    half = FieldElement(1, 0) / 2 if exact else 0.5
    return ReducedState(
        q1=q, q2=q * half, q3=q * sqrt3 * half,
        p1=p, p2=c.cA * p + c.cB / q, p3=c.cC * p + c.cD / q,
        k=FieldElement.coerce(k) if exact else complex(field_eval(FieldElement.coerce(k))),
    )


def orbit_branches(s: ReducedState, m: MassParameters) -> Branches:
    """Branch references making all square roots analytic along the orbit.

    On the equilateral orbit both distances equal ``q1``, and the root
    ``K-`` reproduces ``p1``, i.e. ``sqrt(Delta) = -(2 a1 p1 + b1)``.
    """
    M1 = FieldElement(1 / m.m1 + 1) if isinstance(s.q1, FieldElement) else complex(1 / m.m1 + 1)
    m3 = FieldElement(1) if isinstance(s.q1, FieldElement) else 1.0
    return Branches(r2=s.q1, r3=s.q1, sqrt_delta=-(M1 * s.p1 + s.p2 / m3))


def _numeric_branches(s, m):
    b = orbit_branches(s, m)
    return Branches(*(None if v is None else complex(jet.value(v)) for v in (b.r2, b.r3, b.sqrt_delta)))


def orbit_time_derivative(w, m: MassParameters, k=1):
    """``dq/dt`` on the orbit from the closed momentum relation."""
    c = _coefficients(m, k, False)
    s = lagrange_orbit(w, m, k)
    M1 = 1 / float(m.m1) + 1.0
    return (M1 + c.cA) * s.p1 + c.cB / s.q1


def orbit_residual(w, m: MassParameters, k=1) -> float:
    """Mismatch between the parametrised orbit's velocity and the Hamiltonian field.

    The velocity is ``dGamma/dw * dw/dt`` with ``dw/dt = (dq/dt) / P'(w)``;
    the residual is normalised by ``max(1, |X_H|)``.
    """
    w = complex(w)
    _check_regular(w, m, k)
    wj = jet.Jet.variable(w, 0, 1)
    sj = lagrange_orbit(wj, m, k)
    c = _coefficients(m, k, False)
    dP = -(2 * c.ea * w + c.eb) / c.ec
    dwdt = orbit_time_derivative(w, m, k) / dP
    vel = np.array([x.grad[0] for x in sj.as_tuple()]) * dwdt
    s = lagrange_orbit(w, m, k)
    field = np.array(reduced_vector_field(s, m, _numeric_branches(s, m)), dtype=complex)
    return float(np.linalg.norm(vel - field) / max(1.0, np.linalg.norm(field)))


def p1_branch(ts: TransverseState, q1, m: MassParameters, k=1, sqrt_ref=None,
              branches: Branches = Branches()):
    """Both roots ``(K+, K-)`` of ``H(q, p) = 0`` solved for ``p1``.

    ``sqrt_ref`` picks the branch of ``sqrt(Delta)`` (the root nearest the
    reference); without it the principal root is used.
    """
    a1, b1, c1 = p1_quadratic(q1, ts, m, k, branches)
    delta = b1 * b1 - 4 * a1 * c1
    if abs(jet.value(delta)) < 1e-300:
        raise BranchPointError("Delta = 0: the two p1 roots coincide")
    ref = sqrt_ref if sqrt_ref is not None else branches.sqrt_delta
    sq = jet.sqrt(delta, None if ref is None else complex(jet.value(ref)))
    return (-b1 + sq) / (2 * a1), (-b1 - sq) / (2 * a1)


def continue_sqrt(values, seed):
    """Continue ``sqrt`` along a sampled path of nonzero values.

    ``seed`` is any complex number near the wanted root of ``values[0]``;
    each later root is the one nearest its predecessor.
    """
    roots = []
    ref = complex(seed)
    for v in values:
        r = jet.branch_sqrt(v, ref)
        roots.append(r)
        ref = r
    return roots


def whittaker_hamiltonian(q1, ts: TransverseState, m, k=1, branches: Branches = Branches()):
    _, kminus = p1_branch(ts, q1, m, k, branches=branches)
    return -kminus


def _whittaker_jet(q1, point, m, k, branches):
    xs = jet.seed(point)
    return whittaker_hamiltonian(q1, TransverseState(*xs), m, k, branches)


def whittaker_field(q1, ts: TransverseState, m: MassParameters, k=1,
                    branches: Branches = Branches(), use_plus=False):
    """``d(q2, q3, p2, p3)/dq1`` for the time-dependent Hamiltonian ``K = -K-``.

    ``use_plus`` switches to the other root (``K = -K+``) for comparison.
    """
    point = [complex(jet.value(v)) for v in ts.as_tuple()]
    xs = jet.seed(point)
    kplus, kminus = p1_branch(TransverseState(*xs), q1, m, k, branches=branches)
    K = -(kplus if use_plus else kminus)
    g = K.grad
    return np.array([g[2], g[3], -g[0], -g[1]])


def orbit_transverse(s: ReducedState) -> TransverseState:
    return TransverseState(s.q2, s.q3, s.p2, s.p3)


def nve_matrix(w, m: MassParameters, k=1) -> np.ndarray:
    """Normal variational matrix in the ``w`` variable.

    Ordering of the variational vector: ``(dq2, dq3, dp2, dp3)``; block form
    ``[[K_pq, K_pp], [-K_qq, -K_qp]] * dq/dw``.
    """
    w = complex(w)
    _check_regular(w, m, k)
    s = lagrange_orbit(w, m, k)
    br = _numeric_branches(s, m)
    K = _whittaker_jet(s.q1, [s.q2, s.q3, s.p2, s.p3], m, k, br)
    H = K.hess
    Kqq, Kqp = H[:2, :2], H[:2, 2:]
    Kpq, Kpp = H[2:, :2], H[2:, 2:]
    c = _coefficients(m, k, False)
    dqdw = -(2 * c.ea * w + c.eb) / c.ec
    return np.block([[Kpq, Kpp], [-Kqq, -Kqp]]) * dqdw


def nve_matrix_fd(w, m: MassParameters, k=1, h=1e-6) -> np.ndarray:
    """Independent check of :func:`nve_matrix`: central differences of the
    Whittaker field with one Richardson extrapolation level."""
    w = complex(w)
    _check_regular(w, m, k)
    s = lagrange_orbit(w, m, k)
    br = _numeric_branches(s, m)
    base = np.array([s.q2, s.q3, s.p2, s.p3], dtype=complex)
    scale = np.maximum(1.0, np.abs(base))

    def field(x):
        return whittaker_field(s.q1, TransverseState(*x), m, k, branches=br)

    J = np.zeros((4, 4), dtype=complex)
    for j in range(4):
        e = np.zeros(4)
        e[j] = h * scale[j]

        def d(step):
            return (field(base + step) - field(base - step)) / (2 * step[j])

        d1, d2 = d(e), d(e / 2)
        J[:, j] = (4 * d2 - d1) / 3
    c = _coefficients(m, k, False)
    dqdw = -(2 * c.ea * w + c.eb) / c.ec
    return J * dqdw


def fuchsian_transform(t, m: MassParameters, k=1, nve=nve_matrix) -> np.ndarray:
    """Coefficient matrix of the ``x`` system, ``eta = diag(LZ, LZ, 1, 1) x``,
    in the rescaled time ``t = w / k``."""
    kk = complex(field_eval(FieldElement.coerce(k)))
    w = kk * complex(t)
    A = nve(w, m, k)
    c = _coefficients(m, k, False)
    l1, l2 = c.lpoly
    z1, z2, z3 = c.zpoly
    L = l1 * w + l2
    Z = (z1 * w + z2) * w + z3
    lz = L * Z
    dlz = l1 * Z + L * (2 * z1 * w + z2)
    C = np.array([lz, lz, 1.0, 1.0])
    out = A * C[None, :] / C[:, None]
    out[0, 0] -= dlz / lz
    out[1, 1] -= dlz / lz
    return out * kk


# -- full variational equations ------------------------------------------

def _H_jet(s: ReducedState, m, br):
    z = jet.seed([complex(v) for v in s.as_tuple()])
    st = ReducedState(*z, k=s.k)
    return hamiltonian_reduced(st, m, br)


def variational_full(w, m: MassParameters, k=1):
    """``J * H_zz`` along the orbit (6 x 6) together with ``H_zz`` and ``H_z``."""
    w = complex(w)
    _check_regular(w, m, k)
    s = lagrange_orbit(w, m, k)
    Hj = _H_jet(s, m, _numeric_branches(s, m))
    J6 = np.block([[np.zeros((3, 3)), np.eye(3)], [-np.eye(3), np.zeros((3, 3))]])
    return J6 @ Hj.hess, Hj.hess, Hj.grad


def first_integral_drift(w0, m: MassParameters, zeta0, t_end=1e-2, k=1, rtol=1e-12, atol=1e-14):
    """Integrate the 6-dim variational system along the orbit and return
    ``|F(t_end) - F(0)|`` for ``F = <zeta, H_z(Gamma)>``."""
    c = _coefficients(m, k, False)

    def rhs(_, y):
        w = y[0]
        s = lagrange_orbit(complex(w), m, k)
        Hj = _H_jet(s, m, _numeric_branches(s, m))
        dq = orbit_time_derivative(complex(w), m, k)
        dP = -(2 * c.ea * w + c.eb) / c.ec
        J6 = np.block([[np.zeros((3, 3)), np.eye(3)], [-np.eye(3), np.zeros((3, 3))]])
        return np.concatenate([[dq / dP], J6 @ Hj.hess @ y[1:]])

    def F(y):
        _, _, grad = variational_full(y[0], m, k)
        return complex(np.dot(y[1:], grad))

    y0 = np.concatenate([[complex(w0)], np.asarray(zeta0, dtype=complex)])
    sol = solve_ivp(rhs, (0.0, t_end), y0, method="DOP853", rtol=rtol, atol=atol)
    if not sol.success:
        raise RuntimeError(sol.message)
    return abs(F(sol.y[:, -1]) - F(y0))
