from fractions import Fraction

import numpy as np
import pytest

from nonint.exactalg import (
    I, ONE, SQRT3, ZERO, FieldElement, LinearField, Matrix, MultiPoly, X_VARS,
    apply_derivation, as_rational, charpoly, commutator, det, field_eval, inverse, nullspace,
    rank, solve,
)


def test_field_embedding_values():
    assert complex(FieldElement(1, 0, 0, 0)) == 1
    assert complex(FieldElement(0, 1, 0, 0)) == pytest.approx(1.7320508075688772)
    assert complex(FieldElement(0, 0, 1, 1)) == pytest.approx(2.7320508075688772j)


def test_field_arithmetic_identities():
    assert SQRT3 * SQRT3 == 3
    assert I * I == -1
    z = FieldElement(Fraction(2, 3), -1, Fraction(1, 7), 5)
    assert z * z.inverse() == ONE
    assert (z - z).is_zero()
    assert z.conjugate().conjugate() == z
    assert complex(z.conjugate()) == pytest.approx(complex(z).conjugate())


def test_field_division_matches_float():
    z = (1 + SQRT3) / (2 - I)
    assert complex(z) == pytest.approx((1 + 3 ** 0.5) / (2 - 1j))
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_as_rational_parses_text():
    assert as_rational("1/5") == Fraction(1, 5)
    assert as_rational("0.1") == Fraction(1, 10)
    with pytest.raises(TypeError):
        as_rational(SQRT3)


def test_to_json_fields():
    js = SQRT3.to_json()
    assert js["sqrt3_part"] == "1" and js["rational"] == "0" and js["text"] == "sqrt3"


def test_charpoly_nilpotent():
    assert charpoly(Matrix([[0, 1], [0, 0]])) == MultiPoly.var("l") ** 2


def test_charpoly_case1_symbolic():
    s = {n: MultiPoly.var(n) for n in ("a1", "a2", "a3", "a4", "c1", "c2", "c3", "c4")}
    z = MultiPoly.constant(0)
    R = Matrix([[s["a1"], s["a2"], s["a3"], s["a4"]], [z, z, z, z],
                [s["c1"], s["c2"], s["c3"], s["c4"]], [z, z, z, z]])
    lam = MultiPoly.var("l")
    expected = lam ** 4 - (s["a1"] + s["c3"]) * lam ** 3 \
        + (s["a1"] * s["c3"] - s["c1"] * s["a3"]) * lam ** 2
    assert charpoly(R) == expected


def test_charpoly_matches_numpy():
    rng = np.random.default_rng(0)
    M = rng.integers(-5, 6, size=(4, 4))
    cp = charpoly(Matrix(M.tolist()))
    coeffs = [complex(field_eval(cp.coeff("l", k).constant_value())) for k in range(4, -1, -1)]
    assert np.allclose(coeffs, np.poly(M))


def test_det_inverse_solve_rank():
    M = Matrix([[2, 1, 0], [1, 3, SQRT3], [0, I, 1]])
    Minv = inverse(M)
    assert M @ Minv == Matrix.identity(3)
    assert det(M) * det(Minv) == ONE
    x = solve(M, [1, 2, 3])
    assert M.matvec(x) == [1, 2, 3]
    S = Matrix([[1, 2], [2, 4]])
    assert rank(S) == 1
    (v,) = nullspace(S)
    assert S.matvec(v) == [0, 0]


def test_delta_on_x1_and_kernel():
    delta = LinearField([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]])
    x1, x2, x3, x4 = (MultiPoly.var(v) for v in X_VARS)
    assert apply_derivation(delta, x1) == x2
    Y1, Y3 = x2, x4 * x1 - x2 * x3
    assert apply_derivation(delta, Y3) == 0
    assert apply_derivation(delta, Y1 * Y1 * Y3) == 0


def test_commutator_self_and_components():
    D = [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 0, 0]]
    delta = LinearField(D)
    assert commutator(delta, delta).is_zero()
    S = {f"{r}{i}": MultiPoly.var(f"{r}{i}") for r in "abcd" for i in range(1, 5)}
    Delta = LinearField(Matrix([[S[f"{r}{i}"] for i in range(1, 5)] for r in "abcd"]))
    comps = commutator(delta, Delta).components()
    x2, x4 = MultiPoly.var("x2"), MultiPoly.var("x4")
    assert comps[1] == S["b1"] * x2 + S["b3"] * x4
    d2 = commutator(delta, commutator(delta, Delta)).matrix * FieldElement(Fraction(-1, 2))
    c2 = LinearField(d2).components()
    assert c2[0] == S["b1"] * x2 + S["b3"] * x4
    assert c2[2] == S["d1"] * x2 + S["d3"] * x4
    assert c2[1] == 0 and c2[3] == 0


def test_commutator_matches_operator_definition():
    # [v1, v2] p == v1(v2 p) - v2(v1 p) on a test polynomial
    A = LinearField([[1, 2, 0, 0], [0, 0, 1, 0], [3, 0, 0, 1], [0, 1, 0, 0]])
    B = LinearField([[0, 0, 1, 0], [1, 0, 0, 2], [0, 1, 0, 0], [2, 0, 0, 1]])
    x1, x2, x3, x4 = (MultiPoly.var(v) for v in X_VARS)
    p = x1 * x2 ** 2 + x3 * x4 - x1 * x4
    lhs = apply_derivation(commutator(A, B), p)
    rhs = apply_derivation(A, apply_derivation(B, p)) - apply_derivation(B, apply_derivation(A, p))
    assert lhs == rhs
