"""Mass parameters and the closed-form scalar data of the parabolic orbit.

Units: ``m1 = alpha``, ``m2 = beta``, ``m3 = 1`` with ``0 < alpha <= beta <= 1``.
Everything here is exact over Q(sqrt3, i) except the two spectral
exponents, which involve nested square roots and are returned as floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import I, SQRT3, FieldElement, as_rational, field_eval


class MassError(ValueError):
    """Raised for masses outside ``0 < alpha <= beta <= 1``."""


@dataclass(frozen=True)
class MassParameters:
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        a = as_rational(self.alpha)
        b = as_rational(self.beta)
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if not (0 < a <= b <= 1):
            raise MassError(f"masses must satisfy 0 < alpha <= beta <= 1, got alpha={a}, beta={b}")

    @property
    def m1(self) -> Fraction:
        return self.alpha

    @property
    def m2(self) -> Fraction:
        return self.beta

    @property
    def m3(self) -> Fraction:
        return Fraction(1)

    def __str__(self):
        return f"(alpha={self.alpha}, beta={self.beta})"


@dataclass(frozen=True)
class DerivedConstants:
    S1: FieldElement
    S2: FieldElement
    S3: FieldElement
    M1mass: FieldElement
    M2mass: FieldElement


@dataclass(frozen=True)
class LagrangeCoefficients:
    """Constants of the equilateral orbit.

    ``cA..cD`` give the momenta ``p2 = cA*p + cB/q``, ``p3 = cC*p + cD/q``;
    ``ea..ed`` the energy relation ``ea p^2 + eb p/q + ec/q + ed/q^2 = h``;
    ``lpoly``/``zpoly`` the coefficients of ``L(w) = l1 w + l2`` and
    ``Z(w) = z1 w^2 + z2 w + z3``.
    """

    cA: FieldElement
    cB: FieldElement
    cC: FieldElement
    cD: FieldElement
    ea: FieldElement
    eb: FieldElement
    ec: FieldElement
    ed: FieldElement
    lpoly: tuple
    zpoly: tuple

    def L(self, w):
        l1, l2 = self.lpoly
        return l1 * w + l2

    def Z(self, w):
        z1, z2, z3 = self.zpoly
        return (z1 * w + z2) * w + z3

    def dLZ(self, w):
        l1, l2 = self.lpoly
        z1, z2, z3 = self.zpoly
        return l1 * self.Z(w) + self.L(w) * (2 * z1 * w + z2)

    def P(self, w):
        """``q`` as a function of ``w = p q`` on the zero-energy orbit."""
        return -((self.ea * w + self.eb) * w + self.ed) / self.ec

    def dP(self, w):
        return -(2 * self.ea * w + self.eb) / self.ec


@dataclass(frozen=True)
class SingularPoints:
    """Finite singular points in the ``w`` plane (for the given ``k``) and
    their ``k = 1`` normalisations ``t0, t1, t2``.  ``w1`` is infinity."""

    w2: FieldElement
    w3: FieldElement
    w4: FieldElement
    t0: FieldElement
    t1: FieldElement
    t2: FieldElement
    k: Fraction

    @property
    def poles(self):
        return (self.t0, self.t1, self.t2)

    def complex_poles(self):
        return tuple(field_eval(t) for t in self.poles)

    def min_gap(self) -> float:
        p = self.complex_poles()
        return min(abs(p[i] - p[j]) for i in range(3) for j in range(i + 1, 3))


@dataclass(frozen=True)
class SpectralData:
    theta: Fraction
    lambda1: float
    lambda2: float
    bound_ok: bool

    def exponents_at_infinity(self):
        return (self.lambda1, self.lambda2, 3 - self.lambda1, 3 - self.lambda2)


def _fe(x) -> FieldElement:
    return FieldElement.coerce(x)


def derive_constants(m: MassParameters) -> DerivedConstants:
    m1, m2, m3 = m.m1, m.m2, m.m3
    return DerivedConstants(
        S1=_fe(m1 + m2 + m3),
        S2=_fe(m1 * m2 + m2 * m3 + m3 * m1),
        S3=_fe(m2 + 2 * m3),
        M1mass=_fe(1 / m1 + 1 / m3),
        M2mass=_fe(1 / m2 + 1 / m3),
    )


def _check_k(k) -> Fraction:
    k = as_rational(k)
    if k == 0:
        raise ValueError("k = 0 is the triple-collision case and is excluded")
    return k


def lagrange_coefficients(m: MassParameters, k=1) -> LagrangeCoefficients:
    k = _check_k(k)
    m1, m2, m3 = m.m1, m.m2, m.m3
    S1 = m1 + m2 + m3
    S2 = m1 * m2 + m2 * m3 + m3 * m1
    S3 = m2 + 2 * m3
    cA = _fe(m2 * (m3 - m1) / (m1 * S3))
    cB = SQRT3 * (-k * S1 * m2 * m3 / (S2 * S3))
    cC = SQRT3 * (m2 * (m1 + m3) / (m1 * S3))
    cD = _fe(-k * m2 * (S2 + m1 * m2 - m3 ** 2) / (S2 * S3))
    ea = _fe(2 * S1 * S2 / (m1 ** 2 * S3 ** 2))
    eb = SQRT3 * (-2 * k * m2 * S1 / (m1 * S3 ** 2))
    ec = _fe(-S2)
    ed = _fe(2 * k ** 2 * S1 * (m2 ** 2 + m2 * m3 + m3 ** 2) / (S3 ** 2 * S2))
    lpoly = (_fe(2 * S2), SQRT3 * (-m1 * m2 * k))
    zpoly = (_fe(S2 ** 2), SQRT3 * (-m1 * m2 * k * S2), _fe(k ** 2 * m1 ** 2 * (m2 ** 2 + m2 * m3 + m3 ** 2)))
    return LagrangeCoefficients(cA, cB, cC, cD, ea, eb, ec, ed, lpoly, zpoly)


def singular_points(m: MassParameters, k=1) -> SingularPoints:
    k = _check_k(k)
    m1, m2, m3 = m.m1, m.m2, m.m3
    S2 = m1 * m2 + m2 * m3 + m3 * m1
    S3 = m2 + 2 * m3
    t0 = SQRT3 * (m1 * m2 / (2 * S2))
    t1 = t0 + I * (m1 * S3 / (2 * S2))
    t2 = t1.conjugate()
    return SingularPoints(w2=t0 * k, w3=t1 * k, w4=t2 * k, t0=t0, t1=t1, t2=t2, k=k)


def theta(m: MassParameters) -> Fraction:
    d = derive_constants(m)
    S1, S2 = d.S1.a, d.S2.a
    return 144 * (1 - 3 * S2 / S1 ** 2)


def spectral_data(m: MassParameters) -> SpectralData:
    th = theta(m)
    bound_ok = 0 <= th < 144
    root = math.sqrt(float(th))
    lam1 = 1.5 + 0.5 * math.sqrt(13 + root)
    lam2 = 1.5 + 0.5 * math.sqrt(13 - root)
    return SpectralData(theta=th, lambda1=lam1, lambda2=lam2, bound_ok=bound_ok)


def _is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def resonance_scan():
    """Integers ``r`` in ``[0, 11]`` for which ``13+r`` and ``13-r`` are
    both perfect squares (none, hence no trivial spectrum at infinity).

    Returns ``(rows, no_resonance)``.
    """
    rows = []
    for r in range(12):
        plus, minus = _is_square(13 + r), _is_square(13 - r)
        rows.append({"r": r, "plus_square": plus, "minus_square": minus, "both": plus and minus})
    return rows, not any(row["both"] for row in rows)
