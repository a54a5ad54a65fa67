"""Exact arithmetic in the biquadratic field Q(sqrt3, i).

Elements are stored as four rationals ``(a, b, c, d)`` standing for
``a + b*sqrt3 + c*i + d*sqrt3*i``.  The representation is unique because
``{1, sqrt3, i, sqrt3*i}`` is a Q-basis of the field.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC

Rational = Fraction

SQRT3_FLOAT = math.sqrt(3.0)


def as_rational(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` / decimal string to a Fraction.

    Binary floats are rejected: they would smuggle rounding error into the
    exact layer.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)) and not isinstance(x, bool):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot use {type(x).__name__} as an exact rational")


class FieldElement:
    """An element ``a + b*sqrt3 + (c + d*sqrt3)*i`` of Q(sqrt3, i)."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a=0, b=0, c=0, d=0):
        self.a = as_rational(a)
        self.b = as_rational(b)
        self.c = as_rational(c)
        self.d = as_rational(d)

    @classmethod
    def _raw(cls, a, b, c, d):
        obj = object.__new__(cls)
        obj.a, obj.b, obj.c, obj.d = a, b, c, d
        return obj

    @classmethod
    def coerce(cls, x) -> "FieldElement":
        if isinstance(x, FieldElement):
            return x
        return cls(as_rational(x))

    # -- structure -----------------------------------------------------
    def coords(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def is_real(self) -> bool:
        return not (self.c or self.d)

    def is_rational(self) -> bool:
        return not (self.b or self.c or self.d)

    def conjugate(self) -> "FieldElement":
        """Complex conjugation ``i -> -i``."""
        return FieldElement._raw(self.a, self.b, -self.c, -self.d)

    def sqrt3_conjugate(self) -> "FieldElement":
        """The automorphism ``sqrt3 -> -sqrt3``."""
        return FieldElement._raw(self.a, -self.b, self.c, -self.d)

    @property
    def real(self) -> "FieldElement":
        return FieldElement._raw(self.a, self.b, Fraction(0), Fraction(0))

    @property
    def imag(self) -> "FieldElement":
        return FieldElement._raw(self.c, self.d, Fraction(0), Fraction(0))

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return FieldElement._raw(self.a + other.a, self.b + other.b,
                                 self.c + other.c, self.d + other.d)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement._raw(-self.a, -self.b, -self.c, -self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return FieldElement._raw(self.a - other.a, self.b - other.b,
                                 self.c - other.c, self.d - other.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, FieldElement):
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                o = Fraction(other)
                return FieldElement._raw(self.a * o, self.b * o, self.c * o, self.d * o)
            return NotImplemented
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = other.a, other.b, other.c, other.d
        if not (b2 or c2 or d2):
            return FieldElement._raw(a1 * a2, b1 * a2, c1 * a2, d1 * a2)
        if not (b1 or c1 or d1):
            return FieldElement._raw(a1 * a2, a1 * b2, a1 * c2, a1 * d2)
        # (re1 + i im1)(re2 + i im2) with re, im in Q(sqrt3)
        rr_a = a1 * a2 + 3 * b1 * b2
        rr_b = a1 * b2 + b1 * a2
        ii_a = c1 * c2 + 3 * d1 * d2
        ii_b = c1 * d2 + d1 * c2
        ri_a = a1 * c2 + 3 * b1 * d2
        ri_b = a1 * d2 + b1 * c2
        ir_a = c1 * a2 + 3 * d1 * b2
        ir_b = c1 * b2 + d1 * a2
        return FieldElement._raw(rr_a - ii_a, rr_b - ii_b, ri_a + ir_a, ri_b + ir_b)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(sqrt3, i)")
        # x * conj(x) = N in Q(sqrt3);  N * sigma(N) in Q
        n_a = self.a * self.a + 3 * self.b * self.b + self.c * self.c + 3 * self.d * self.d
        n_b = 2 * (self.a * self.b + self.c * self.d)
        norm = n_a * n_a - 3 * n_b * n_b
        inv_n = FieldElement._raw(n_a / norm, -n_b / norm, Fraction(0), Fraction(0))
        return self.conjugate() * inv_n

    def __truediv__(self, other):
        if not isinstance(other, FieldElement):
            if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
                o = Fraction(other)
                if o == 0:
                    raise ZeroDivisionError("division by zero")
                return FieldElement._raw(self.a / o, self.b / o, self.c / o, self.d / o)
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return FieldElement.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            try:
                other = FieldElement.coerce(other)
            except TypeError:
                return NotImplemented
        return self.coords() == other.coords()

    def __hash__(self):
        if self.is_rational():
            return hash(self.a)
        return hash(self.coords())

    def __bool__(self):
        return not self.is_zero()

    # -- numerics and display -------------------------------------------
    def __complex__(self):
        return field_eval(self)

    def __float__(self):
        if not self.is_real():
            raise TypeError("non-real field element has no float value")
        return float(self.a) + float(self.b) * SQRT3_FLOAT

    def __repr__(self):
        return f"FieldElement({self})"

    def __str__(self):
        parts = []
        for coeff, unit in zip(self.coords(), ("", "sqrt3", "i", "sqrt3*i")):
            if not coeff:
                continue
            if not unit:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(unit)
            elif coeff == -1:
                parts.append("-" + unit)
            elif coeff.denominator == 1:
                parts.append(f"{coeff}*{unit}")
            elif abs(coeff.numerator) == 1:
                sign = "-" if coeff < 0 else ""
                parts.append(f"{sign}{unit}/{coeff.denominator}")
            else:
                parts.append(f"{coeff.numerator}*{unit}/{coeff.denominator}")
        if not parts:
            return "0"
        text = parts[0]
        for p in parts[1:]:
            text += (" - " + p[1:]) if p.startswith("-") else (" + " + p)
        return text

    def to_json(self) -> dict:
        return {
            "rational": str(self.a),
            "sqrt3_part": str(self.b),
            "i_part": str(self.c),
            "sqrt3_i_part": str(self.d),
            "text": str(self),
        }


def field_eval(e: FieldElement) -> complex:
    """Evaluate an exact field element in double precision."""
    re = float(e.a) + float(e.b) * SQRT3_FLOAT
    im = float(e.c) + float(e.d) * SQRT3_FLOAT
    return complex(re, im)


ZERO = FieldElement()
ONE = FieldElement(1)
SQRT3 = FieldElement(0, 1)
I = FieldElement(0, 0, 1)


def fe(x) -> FieldElement:
    return FieldElement.coerce(x)
