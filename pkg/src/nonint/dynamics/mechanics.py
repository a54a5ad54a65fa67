"""Hamiltonians of the planar three-body problem and its canonical reductions.

Scalar arguments may be complex numbers, :class:`~nonint.dynamics.jet.Jet`
objects or exact :class:`~nonint.exactalg.FieldElement` values.  Square roots
(mutual distances) take an optional reference value selecting the branch;
for exact inputs the reference must be an exact root.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..exactalg import FieldElement
from ..model import MassParameters
from . import jet


class CollisionError(ValueError):
    """A mutual distance (or another denominator) vanishes."""


def xsqrt(x, ref=None):
    """Square root dispatching on scalar type, with branch reference."""
    if isinstance(x, FieldElement):
        if ref is not None:
            ref = FieldElement.coerce(ref)
            if ref * ref == x:
                return ref
        if x.is_rational() and x.a >= 0:
            # positive root of a rational perfect square
            num, den = math.isqrt(x.a.numerator), math.isqrt(x.a.denominator)
            if num * num == x.a.numerator and den * den == x.a.denominator:
                return FieldElement(Fraction(num, den))
        raise ValueError(f"no exact square root of {x} available")
    return jet.sqrt(x, None if ref is None else complex(jet.value(ref)))


def _nonzero(x, what):
    v = x if isinstance(x, FieldElement) else jet.value(x)
    if (v.is_zero() if isinstance(v, FieldElement) else abs(v) == 0.0):
        raise CollisionError(f"{what} vanishes")
    return x


def _masses(m: MassParameters):
    return m.m1, m.m2, m.m3


def _num(x):
    """Fractions become FieldElements so they mix with Jets and exact values."""
    return FieldElement.coerce(x)


def _c(x, like):
    """Convert an exact constant to match the arithmetic of ``like``."""
    if isinstance(like, FieldElement):
        return FieldElement.coerce(x)
    if isinstance(x, (complex, float)):
        return complex(x)
    return complex(FieldElement.coerce(x))


# -- full six-degree-of-freedom problem --------------------------------

@dataclass
class FullState:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=complex)
        self.y = np.asarray(self.y, dtype=complex)


def hamiltonian_full(s: FullState, m: MassParameters, xs=None, ys=None):
    """Kinetic minus Newtonian potential energy (gravitational constant 1)."""
    x = s.x if xs is None else xs
    y = s.y if ys is None else ys
    m1, m2, m3 = (complex(v) for v in _masses(m))
    kin = (y[0] ** 2 + y[1] ** 2) / (2 * m1) + (y[2] ** 2 + y[3] ** 2) / (2 * m2) \
        + (y[4] ** 2 + y[5] ** 2) / (2 * m3)
    d23 = _nonzero(jet.sqrt((x[2] - x[4]) ** 2 + (x[3] - x[5]) ** 2), "distance m2-m3")
    d31 = _nonzero(jet.sqrt((x[4] - x[0]) ** 2 + (x[5] - x[1]) ** 2), "distance m3-m1")
    d12 = _nonzero(jet.sqrt((x[0] - x[2]) ** 2 + (x[1] - x[3]) ** 2), "distance m1-m2")
    return kin - m3 * m2 / d23 - m3 * m1 / d31 - m1 * m2 / d12


@dataclass
class RelativeState:
    l: np.ndarray
    g: np.ndarray

    def __post_init__(self):
        self.l = np.asarray(self.l, dtype=complex)
        self.g = np.asarray(self.g, dtype=complex)


def relative_map(x, y):
    """Coordinates relative to ``m3`` and the conjugate momenta."""
    l = [x[0] - x[4], x[1] - x[5], x[2] - x[4], x[3] - x[5], x[4], x[5]]
    g = [y[0], y[1], y[2], y[3], y[0] + y[2] + y[4], y[1] + y[3] + y[5]]
    return l, g


def reduce_relative(s: FullState) -> RelativeState:
    l, g = relative_map(s.x, s.y)
    return RelativeState(l, g)


def expand_relative(r: RelativeState) -> FullState:
    l, g = r.l, r.g
    x = [l[0] + l[4], l[1] + l[5], l[2] + l[4], l[3] + l[5], l[4], l[5]]
    y = [g[0], g[1], g[2], g[3], g[4] - g[0] - g[2], g[5] - g[1] - g[3]]
    return FullState(x, y)


def hamiltonian_relative(r: RelativeState, m: MassParameters):
    """Energy in the centre-of-mass frame (``g5 = g6 = 0``)."""
    l, g = r.l, r.g
    m1, m2, m3 = (complex(v) for v in _masses(m))
    M1 = 1 / m1 + 1 / m3
    M2 = 1 / m2 + 1 / m3
    rho1 = _nonzero(cmath.sqrt(l[2] ** 2 + l[3] ** 2), "rho1")
    rho2 = _nonzero(cmath.sqrt(l[0] ** 2 + l[1] ** 2), "rho2")
    rho3 = _nonzero(cmath.sqrt((l[0] - l[2]) ** 2 + (l[1] - l[3]) ** 2), "rho3")
    return (M1 / 2 * (g[0] ** 2 + g[1] ** 2) + M2 / 2 * (g[2] ** 2 + g[3] ** 2)
            + (g[0] * g[2] + g[1] * g[3]) / m3
            - m3 * m2 / rho1 - m1 * m3 / rho2 - m1 * m2 / rho3)


# -- rotating reduction ----------------------------------------------

@dataclass
class ReducedState:
    q1: object
    q2: object
    q3: object
    p1: object
    p2: object
    p3: object
    k: object = 1

    def as_tuple(self):
        return (self.q1, self.q2, self.q3, self.p1, self.p2, self.p3)

    def to_array(self):
        return np.array([complex(v) for v in self.as_tuple()])


@dataclass
class TransverseState:
    q2: object
    q3: object
    p2: object
    p3: object

    def as_tuple(self):
        return (self.q2, self.q3, self.p2, self.p3)


def rotating_forward(q, p):
    """``(q1..q4, p1..p4) -> (l1..l4, g1..g4)`` from the generating function.

    Works on complex scalars or Jets.
    """
    q1, q2, q3, q4 = q
    p1, p2, p3, p4 = p
    c, s = jet.cos(q4), jet.sin(q4)
    l = [q1 * c, q1 * s, q2 * c - q3 * s, q2 * s + q3 * c]
    g3 = p2 * c - p3 * s
    g4 = p2 * s + p3 * c
    rest = g3 * (-(q2 * s) - q3 * c) + g4 * (q2 * c - q3 * s)
    u = (p4 - rest) / q1
    g1 = p1 * c - u * s
    g2 = p1 * s + u * c
    return l, [g1, g2, g3, g4]


def reduce_rotating(r: RelativeState):
    """Relative (centre-of-mass) state to the rotating frame.

    Returns ``(ReducedState, q4)``; the state's ``k`` is the angular
    momentum ``p4 = g2 l1 + g4 l3 - g1 l2 - g3 l4``.
    """
    l1, l2, l3, l4 = r.l[:4]
    g1, g2, g3, g4 = r.g[:4]
    rr = l1 ** 2 + l2 ** 2
    if rr == 0:
        raise CollisionError("l1 = l2 = 0: rotation angle undefined")
    q1 = cmath.sqrt(rr)
    q4 = cmath.log((l1 + 1j * l2) / q1) / 1j
    c, s = cmath.cos(q4), cmath.sin(q4)
    q2 = l3 * c + l4 * s
    q3 = -l3 * s + l4 * c
    p1 = g1 * c + g2 * s
    p2 = g3 * c + g4 * s
    p3 = -g3 * s + g4 * c
    p4 = g2 * l1 + g4 * l3 - g1 * l2 - g3 * l4
    return ReducedState(q1, q2, q3, p1, p2, p3, p4), q4


def expand_rotating(s: ReducedState, q4) -> RelativeState:
    l, g = rotating_forward((s.q1, s.q2, s.q3, q4), (s.p1, s.p2, s.p3, s.k))
    return RelativeState(list(l) + [0, 0], list(g) + [0, 0])


# -- the reduced Hamiltonian -------------------------------------------

@dataclass(frozen=True)
class Branches:
    """Reference values selecting square-root branches along a complex path."""

    r2: object = None
    r3: object = None
    sqrt_delta: object = None


NO_BRANCH = Branches()


def _reduced_parts(q1, q2, q3, p2, p3, m, k, branches):
    m1, m2, m3 = (_c(v, q1) for v in _masses(m))
    kk = _c(k, q1)
    M1 = 1 / m1 + 1 / m3 if not isinstance(q1, FieldElement) else FieldElement(1 / m.m1 + 1)
    M2 = 1 / m2 + 1 / m3 if not isinstance(q1, FieldElement) else FieldElement(1 / m.m2 + 1)
    P = p3 * q2 - p2 * q3 - kk
    r2 = _nonzero(xsqrt(q2 * q2 + q3 * q3, branches.r2), "r2")
    r3 = _nonzero(xsqrt((q1 - q2) * (q1 - q2) + q3 * q3, branches.r3), "r3")
    _nonzero(q1, "r1")
    return m1, m2, m3, M1, M2, P, r2, r3


def _promote_exact(values):
    # exact arithmetic when any coordinate is a field element
    if any(isinstance(v, FieldElement) for v in values) and all(
            isinstance(v, (FieldElement, int, Fraction)) for v in values):
        return [FieldElement.coerce(v) for v in values]
    return list(values)


def hamiltonian_reduced(s: ReducedState, m: MassParameters, branches: Branches = NO_BRANCH):
    q1, q2, q3, p1, p2, p3 = _promote_exact(s.as_tuple())
    m1, m2, m3, M1, M2, P, r2, r3 = _reduced_parts(q1, q2, q3, p2, p3, m, s.k, branches)
    half = _c(FieldElement(1) / 2, q1)
    return (M1 * half * (p1 * p1 + P * P / (q1 * q1)) + M2 * half * (p2 * p2 + p3 * p3)
            + (p1 * p2 - p3 * P / q1) / m3
            - m1 * m3 / q1 - m3 * m2 / r2 - m1 * m2 / r3)


def p1_quadratic(q1, ts: TransverseState, m: MassParameters, k, branches: Branches = NO_BRANCH):
    """Coefficients ``(a1, b1, c1)`` of ``H = a1 p1^2 + b1 p1 + c1``."""
    q2, q3, p2, p3 = ts.as_tuple()
    m1, m2, m3, M1, M2, P, r2, r3 = _reduced_parts(q1, q2, q3, p2, p3, m, k, branches)
    half = _c(FieldElement(1) / 2, q1)
    a1 = M1 * half
    b1 = p2 / m3
    c1 = (M1 * half * P * P / (q1 * q1) + M2 * half * (p2 * p2 + p3 * p3)
          - p3 * P / (m3 * q1) - m1 * m3 / q1 - m3 * m2 / r2 - m1 * m2 / r3)
    return a1, b1, c1


def reduced_vector_field(s: ReducedState, m: MassParameters, branches: Branches = NO_BRANCH):
    """Hamiltonian vector field ``(dH/dp, -dH/dq)`` from hand-derived partials."""
    q1, q2, q3, p1, p2, p3 = s.as_tuple()
    m1, m2, m3, M1, M2, P, r2, r3 = _reduced_parts(q1, q2, q3, p2, p3, m, s.k, branches)
    r2c, r3c = r2 * r2 * r2, r3 * r3 * r3
    Hp1 = M1 * p1 + p2 / m3
    Hp2 = -M1 * P * q3 / (q1 * q1) + M2 * p2 + (p1 + p3 * q3 / q1) / m3
    Hp3 = M1 * P * q2 / (q1 * q1) + M2 * p3 - (P + p3 * q2) / (m3 * q1)
    Hq1 = (-M1 * P * P / (q1 * q1 * q1) + p3 * P / (m3 * q1 * q1) + m1 * m3 / (q1 * q1)
           + m1 * m2 * (q1 - q2) / r3c)
    Hq2 = M1 * P * p3 / (q1 * q1) - p3 * p3 / (m3 * q1) + m3 * m2 * q2 / r2c - m1 * m2 * (q1 - q2) / r3c
    Hq3 = -M1 * P * p2 / (q1 * q1) + p3 * p2 / (m3 * q1) + m3 * m2 * q3 / r2c + m1 * m2 * q3 / r3c
    return [Hp1, Hp2, Hp3, -Hq1, -Hq2, -Hq3]


def symplectic_form(n: int) -> np.ndarray:
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def jacobian(f, point):
    """Jacobian of a vector map via first-order forward differentiation."""
    out = f(jet.seed(point))
    return np.array([o.grad if isinstance(o, jet.Jet) else np.zeros(len(point)) for o in out])


def symplectic_defect(M: np.ndarray) -> float:
    n = M.shape[0] // 2
    Om = symplectic_form(n)
    return float(np.abs(M.T @ Om @ M - Om).max())


def relative_jacobian() -> np.ndarray:
    """Jacobian of ``(x, y) -> (l, g)``; the map is linear."""
    def f(v):
        l, g = relative_map(v[:6], v[6:])
        return l + g
    return jacobian(f, np.zeros(12))


def rotating_jacobian(q, p) -> np.ndarray:
    """Jacobian of ``(q, p) -> (l, g)`` at a point (8 x 8)."""
    def f(v):
        l, g = rotating_forward(v[:4], v[4:])
        return l + g
    return jacobian(f, list(q) + list(p))

