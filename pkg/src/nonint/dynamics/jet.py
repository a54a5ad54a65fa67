"""Second-order forward-mode differentiation over complex scalars.

A :class:`Jet` carries a value, its gradient and its Hessian with respect
to ``n`` seed variables.  Arithmetic propagates all three exactly (up to
rounding), so one evaluation of a scalar function yields the full Hessian.
"""

from __future__ import annotations

import cmath

import numpy as np


class Jet:
    __slots__ = ("val", "grad", "hess")

    def __init__(self, val, grad, hess):
        self.val = complex(val)
        self.grad = grad
        self.hess = hess

    @classmethod
    def variable(cls, val, index, n):
        g = np.zeros(n, dtype=complex)
        g[index] = 1.0
        return cls(val, g, np.zeros((n, n), dtype=complex))

    @classmethod
    def constant(cls, val, n):
        return cls(val, np.zeros(n, dtype=complex), np.zeros((n, n), dtype=complex))

    @property
    def n(self):
        return self.grad.shape[0]

    def _lift(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.n)

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.grad + other.grad, self.hess + other.hess)
        return Jet(self.val + other, self.grad, self.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.grad, -self.hess)

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val - other.val, self.grad - other.grad, self.hess - other.hess)
        return Jet(self.val - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Jet(other - self.val, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b = self, other
            outer = np.outer(a.grad, b.grad)
            return Jet(
                a.val * b.val,
                a.grad * b.val + b.grad * a.val,
                a.hess * b.val + b.hess * a.val + outer + outer.T,
            )
        other = complex(other)
        return Jet(self.val * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def _unary(self, f0, f1, f2):
        return Jet(f0, f1 * self.grad, f1 * self.hess + f2 * np.outer(self.grad, self.grad))

    def reciprocal(self):
        v = self.val
        return self._unary(1 / v, -1 / v ** 2, 2 / v ** 3)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1 / complex(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k == 0:
            return Jet.constant(1.0, self.n)
        v = self.val
        if k == 1:
            return self
        return self._unary(v ** k, k * v ** (k - 1), k * (k - 1) * v ** (k - 2))

    def sqrt(self, ref=None):
        s = branch_sqrt(self.val, ref)
        return self._unary(s, 0.5 / s, -0.25 / s ** 3)

    def cos(self):
        c, s = cmath.cos(self.val), cmath.sin(self.val)
        return self._unary(c, -s, -c)

    def sin(self):
        c, s = cmath.cos(self.val), cmath.sin(self.val)
        return self._unary(s, c, -s)

    def __complex__(self):
        return self.val

    def __repr__(self):
        return f"Jet({self.val})"


def branch_sqrt(z, ref=None):
    """Principal square root, or the sign nearest ``ref`` when given."""
    s = cmath.sqrt(complex(z))
    if ref is not None and abs(s - ref) > abs(s + ref):
        return -s
    return s


def sqrt(x, ref=None):
    if isinstance(x, Jet):
        return x.sqrt(ref)
    return branch_sqrt(x, ref)


def cos(x):
    return x.cos() if isinstance(x, Jet) else cmath.cos(x)


def sin(x):
    return x.sin() if isinstance(x, Jet) else cmath.sin(x)


def value(x):
    return x.val if isinstance(x, Jet) else complex(x)


def seed(values):
    """Independent Jet variables for a point ``values``."""
    n = len(values)
    return [Jet.variable(v, i, n) for i, v in enumerate(values)]


def gradient(f, point):
    out = f(*seed(point))
    return out.grad.copy()


def hessian(f, point):
    out = f(*seed(point))
    return out.hess.copy()
