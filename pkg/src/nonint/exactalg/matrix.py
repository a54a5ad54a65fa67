"""Small dense matrices over exact rings (field elements or polynomials)."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .field import ONE, ZERO, FieldElement, field_eval
from .poly import MultiPoly, as_poly


class Matrix:
    """Row-major matrix whose entries support ``+``, ``-`` and ``*``.

    Entries are :class:`FieldElement` or :class:`MultiPoly`; the class does
    no coercion beyond what those types do themselves.
    """

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self.rows = [[_coerce(x) for x in r] for r in rows]

    @classmethod
    def identity(cls, n, one=ONE):
        zero = one * 0
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n, m=None, zero=ZERO):
        return cls([[zero] * (m if m is not None else n) for _ in range(n)])

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def is_square(self):
        r, c = self.shape
        return r == c

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __iter__(self):
        return iter(self.rows)

    def __add__(self, other):
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Matrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return Matrix([[-x for x in r] for r in self.rows])

    def __mul__(self, scalar):
        return Matrix([[x * scalar for x in r] for r in self.rows])

    __rmul__ = __mul__

    def __matmul__(self, other):
        n, k = self.shape
        k2, m = other.shape
        if k != k2:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = r[0] * c[0]
                for x, y in zip(r[1:], c[1:]):
                    acc = acc + x * y
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def matvec(self, v):
        out = []
        for r in self.rows:
            acc = r[0] * v[0]
            for x, y in zip(r[1:], v[1:]):
                acc = acc + x * y
            out.append(acc)
        return out

    def transpose(self):
        return Matrix([list(c) for c in zip(*self.rows)])

    T = property(transpose)

    def conjugate(self):
        return Matrix([[x.conjugate() for x in r] for r in self.rows])

    def trace(self):
        acc = self.rows[0][0]
        for i in range(1, len(self.rows)):
            acc = acc + self.rows[i][i]
        return acc

    def map(self, fn):
        return Matrix([[fn(x) for x in r] for r in self.rows])

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and all(
            x == y for r, s in zip(self.rows, other.rows) for x, y in zip(r, s)
        )

    def to_numpy(self) -> np.ndarray:
        return np.array([[field_eval(x) for x in r] for r in self.rows], dtype=complex)

    def __repr__(self):
        return "Matrix(" + repr([[str(x) for x in r] for r in self.rows]) + ")"


PolyMatrix = Matrix


def _coerce(x):
    if isinstance(x, (FieldElement, MultiPoly)):
        return x
    return FieldElement.coerce(x)


def charpoly(m: Matrix, var: str = "l") -> MultiPoly:
    """``det(var*I - m)`` by the Faddeev-LeVerrier recursion.

    Only exact division by the integers ``1..n`` occurs, so entries may be
    field elements or polynomials in unknowns.
    """
    if not m.is_square():
        raise ValueError(f"charpoly needs a square matrix, got {m.shape}")
    n = m.shape[0]
    if n > 8:
        raise ValueError("charpoly supports side <= 8")
    lam = MultiPoly.var(var)
    if not any(isinstance(x, MultiPoly) for r in m.rows for x in r):
        return _charpoly_scalar(m, n, lam)
    entries = [[as_poly(x) for x in r] for r in m.rows]
    a = Matrix(entries)
    zero = MultiPoly.constant(0)
    one = MultiPoly.constant(1)
    coeffs = [None] * (n + 1)
    coeffs[n] = one
    mk = Matrix.zeros(n, zero=zero)
    ident = Matrix.identity(n, one=one)
    for k in range(1, n + 1):
        mk = a @ mk + ident * coeffs[n - k + 1]
        coeffs[n - k] = (a @ mk).trace() * FieldElement(Fraction(-1, k))
    result = zero
    for i, c in enumerate(coeffs):
        result = result + c * lam ** i
    return result.with_variables((var,) + tuple(v for v in result.variables if v != var))


def _charpoly_scalar(m: Matrix, n: int, lam: MultiPoly) -> MultiPoly:
    """Faddeev-LeVerrier on integer coordinates.

    The matrix is scaled by the common denominator ``D`` so that all entries
    lie in ``Z[sqrt3, i]``; the recursion then stays in that ring (each
    division by ``k`` is exact) and the ``l^(n-k)`` coefficient of the
    original matrix is the scaled one divided by ``D^k``.
    """
    els = [[FieldElement.coerce(x) for x in r] for r in m.rows]
    D = 1
    for r in els:
        for x in r:
            for c in x.coords():
                D = math.lcm(D, c.denominator)
    a = [[tuple(int(c * D) for c in x.coords()) for x in r] for r in els]
    zero4 = (0, 0, 0, 0)
    coeffs = [None] * (n + 1)
    coeffs[n] = (1, 0, 0, 0)
    mk = [[zero4] * n for _ in range(n)]
    for k in range(1, n + 1):
        prod = _matmul4(a, mk)
        c = coeffs[n - k + 1]
        for i in range(n):
            prod[i][i] = tuple(u + v for u, v in zip(prod[i][i], c))
        mk = prod
        am = _matmul4(a, mk)
        tr = [sum(am[i][i][j] for i in range(n)) for j in range(4)]
        if any(t % k for t in tr):
            raise ArithmeticError("inexact division in Faddeev-LeVerrier recursion")
        coeffs[n - k] = tuple(-t // k for t in tr)
    result = MultiPoly.constant(0)
    for i, c in enumerate(coeffs):
        scale = Fraction(1, D ** (n - i))
        result = result + lam ** i * FieldElement(*(Fraction(v) * scale for v in c))
    return result


def _mul4(x, y):
    a1, b1, c1, d1 = x
    a2, b2, c2, d2 = y
    return (a1 * a2 + 3 * b1 * b2 - c1 * c2 - 3 * d1 * d2,
            a1 * b2 + b1 * a2 - c1 * d2 - d1 * c2,
            a1 * c2 + 3 * b1 * d2 + c1 * a2 + 3 * d1 * b2,
            a1 * d2 + b1 * c2 + c1 * b2 + d1 * a2)


def _matmul4(x, y):
    n, p = len(x), len(y[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = [0, 0, 0, 0]
            for k in range(len(y)):
                t = _mul4(x[i][k], y[k][j])
                acc[0] += t[0]
                acc[1] += t[1]
                acc[2] += t[2]
                acc[3] += t[3]
            row.append(tuple(acc))
        out.append(row)
    return out


def det(m: Matrix):
    """Determinant via the constant term of the characteristic polynomial."""
    n = m.shape[0]
    p = charpoly(m, var="_det_l")
    c0 = p.coeff("_det_l", 0)
    val = c0 * ((-1) ** n)
    if val.is_constant() and not val.variables:
        return val.constant_value()
    return val


# -- linear algebra over the field -------------------------------------

def solve(m: Matrix, rhs):
    """Solve ``m x = rhs`` exactly for nonsingular square ``m``."""
    n = m.shape[0]
    aug = [list(r) + [rhs[i]] for i, r in enumerate(m.rows)]
    _eliminate(aug, n)
    return [aug[i][n] for i in range(n)]


def _eliminate(aug, ncols):
    n = len(aug)
    row = 0
    pivots = []
    for col in range(ncols):
        piv = next((r for r in range(row, n) if aug[r][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = aug[row][col].inverse()
        aug[row] = [x * inv for x in aug[row]]
        for r in range(n):
            if r != row and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    if len(pivots) < ncols and ncols == n:
        raise ZeroDivisionError("singular matrix")
    return pivots


def rref(m: Matrix):
    rows = [list(r) for r in m.rows]
    n, ncols = m.shape
    row = 0
    pivots = []
    for col in range(ncols):
        piv = next((r for r in range(row, n) if rows[r][col]), None)
        if piv is None:
            continue
        rows[row], rows[piv] = rows[piv], rows[row]
        inv = rows[row][col].inverse()
        rows[row] = [x * inv for x in rows[row]]
        for r in range(n):
            if r != row and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[row])]
        pivots.append(col)
        row += 1
        if row == n:
            break
    return rows, pivots


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def nullspace(m: Matrix):
    """Basis of the right kernel, each vector scaled to a leading 1."""
    rows, pivots = rref(m)
    ncols = m.shape[1]
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        basis.append(normalize_leading(v))
    return basis


def normalize_leading(v):
    """Scale ``v`` so that its first nonzero coordinate equals 1."""
    lead = next((x for x in v if x), None)
    if lead is None:
        return list(v)
    inv = lead.inverse()
    return [x * inv for x in v]


def inverse(m: Matrix) -> Matrix:
    """Exact inverse by Gauss-Jordan elimination."""
    n = m.shape[0]
    if not m.is_square():
        raise ValueError("inverse needs a square matrix")
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m.rows)]
    _eliminate(aug, n)
    return Matrix([r[n:] for r in aug])
