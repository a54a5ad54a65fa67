"""Linear vector fields ``sum_j (M x)_j d/dx_j`` acting on polynomials."""

from __future__ import annotations

from .matrix import Matrix
from .poly import MultiPoly, as_poly

X_VARS = ("x1", "x2", "x3", "x4")


class LinearField:
    """The derivation whose ``j``-th component is ``sum_i matrix[j][i] * x_i``.

    Matrix entries are scalars or polynomials in parameters (never in the
    ``x`` variables themselves).
    """

    def __init__(self, matrix, variables=X_VARS):
        self.matrix = matrix if isinstance(matrix, Matrix) else Matrix(matrix)
        self.variables = tuple(variables)
        if self.matrix.shape != (len(self.variables),) * 2:
            raise ValueError("coefficient matrix must be n x n for n variables")

    def components(self):
        xs = [MultiPoly.var(v) for v in self.variables]
        comps = []
        for row in self.matrix.rows:
            acc = MultiPoly.constant(0)
            for coeff, x in zip(row, xs):
                acc = acc + as_poly(coeff) * x
            comps.append(acc)
        return comps

    def __call__(self, p):
        return apply_derivation(self, p)

    def __eq__(self, other):
        return isinstance(other, LinearField) and self.matrix == other.matrix

    def is_zero(self):
        return all(not x for r in self.matrix.rows for x in r)


def apply_derivation(v: LinearField, p: MultiPoly) -> MultiPoly:
    p = as_poly(p)
    foreign = [name for name in p.variables
               if name.startswith("x") and name not in v.variables and p.degree(name) > 0]
    if foreign:
        raise ValueError(f"polynomial uses variables {foreign} outside the field's {v.variables}")
    out = MultiPoly.constant(0)
    for comp, name in zip(v.components(), v.variables):
        d = p.diff(name)
        if d:
            out = out + comp * d
    return out


def commutator(v1: LinearField, v2: LinearField) -> LinearField:
    """``[v1, v2] = v1 v2 - v2 v1``; for linear fields its matrix is ``B A - A B``."""
    if v1.variables != v2.variables:
        raise ValueError("fields act on different variables")
    a, b = v1.matrix, v2.matrix
    return LinearField(b @ a - a @ b, v1.variables)
