"""Exact arithmetic substrate: Q(sqrt3, i), polynomials, matrices, derivations."""

from .derivation import X_VARS, LinearField, apply_derivation, commutator
from .field import I, ONE, SQRT3, ZERO, FieldElement, Rational, as_rational, fe, field_eval
from .matrix import (
    Matrix, PolyMatrix, charpoly, det, inverse, nullspace, normalize_leading, rank, solve,
)
from .poly import MultiPoly, as_poly

__all__ = [
    "FieldElement", "Rational", "MultiPoly", "Matrix", "PolyMatrix", "LinearField",
    "I", "ONE", "SQRT3", "ZERO", "X_VARS",
    "as_poly", "as_rational", "apply_derivation", "charpoly", "commutator", "det",
    "fe", "field_eval", "inverse", "nullspace", "normalize_leading", "rank", "solve",
]
