"""The Fuchsian normal variational system with exact residue matrices.

Residues are built from a single transcription table: each entry is a
formula string in ``a`` (= alpha), ``b`` (= beta), ``S1``, ``S2``, ``S3`` and
``r3`` (= sqrt3) evaluated exactly over Q(sqrt3, i).  The formula string is
kept as the entry's provenance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactalg import I, SQRT3, FieldElement, Matrix, charpoly, field_eval
from .exactalg.poly import MultiPoly
from .model import MassParameters, derive_constants, singular_points

# ``u`` is the recurring factor (a+1) b (a-1) / (a S1).
_U = "(a+1)*b*(a-1)/(a*S1)"
_UPPER = "S1/(S2**2*S3**3*a**4*b)"

TABLE = {
    "Ainf": {
        (1, 1): "F(1,4)*(12*a + 5*b + 5*b*a**2 + 26*a*b + 12*a**2)/(a*S1)",
        (1, 2): f"F(3,4)*r3*{_U}",
        (1, 3): f"-2*{_UPPER}",
        (1, 4): "0",
        (2, 1): f"F(3,4)*r3*{_U}",
        (2, 2): "-F(1,4)*(-12*a + b + b*a**2 - 2*a*b - 12*a**2)/(a*S1)",
        (2, 3): "0",
        (2, 4): f"-2*{_UPPER}",
        (3, 1): "F(1,8)*a**2*b*S3**3*(a+1)*S2**3*(2*a + 13*b + 13*b*a**2 + 24*a*b + 2*a**2)/S1**3",
        (3, 2): "F(3,8)*r3*(b + 2*a + 4*a*b + b*a**2 + 2*a**2)*(a-1)*b*a**2*S3**3*S2**3/S1**3",
        (3, 3): "-F(1,4)*b*(5*a**2 + 14*a + 5)/(a*S1)",
        (3, 4): f"-F(3,4)*r3*{_U}",
        (4, 1): "F(3,8)*r3*(b + 2*a + 4*a*b + b*a**2 + 2*a**2)*(a-1)*b*a**2*S3**3*S2**3/S1**3",
        (4, 2): "F(1,8)*a**2*b*S3**3*(a+1)*S2**3*(-10*a + 7*b + 7*b*a**2 - 12*a*b - 10*a**2)/S1**3",
        (4, 3): f"-F(3,4)*r3*{_U}",
        (4, 4): "F(1,4)*b*(10*a + a**2 + 1)/(a*S1)",
    },
    "A": {
        (1, 1): "-F(1,4)*(a+1)*(a*b + 4*a + b)/(a*S1)",
        (1, 2): f"F(1,4)*r3*{_U}",
        (1, 3): f"2*{_UPPER}",
        (1, 4): "0",
        (2, 1): f"F(1,4)*r3*{_U}",
        (2, 2): "-F(1,4)*(10*a*b + 3*b*a**2 + 3*b + 4*a**2 + 4*a)/(a*S1)",
        (2, 3): "0",
        (2, 4): f"2*{_UPPER}",
        (3, 1): "-F(1,8)*a**2*b**2*S3**3*(a+1)*(a-1)**2*S2**3/S1**3",
        (3, 2): "F(1,8)*r3*(a-1)*(a+1)**2*a**2*b**2*S2**3*S3**3/S1**3",
        (3, 3): "F(1,4)*(a-1)**2*b/(a*S1)",
        (3, 4): f"-F(1,4)*r3*{_U}",
        (4, 1): "F(1,8)*r3*(a-1)*(a+1)**2*a**2*b**2*S2**3*S3**3/S1**3",
        (4, 2): "-F(3,8)*a**2*b**2*S3**3*(a+1)**3*S2**3/S1**3",
        (4, 3): f"-F(1,4)*r3*{_U}",
        (4, 4): "F(3,4)*(a+1)**2*b/(a*S1)",
    },
    "R": {
        (1, 1): "-F(1,2)*(2*a + b + 6*a*b + 2*a**2 + b*a**2)/(a*S1)",
        (1, 2): f"-F(1,2)*r3*{_U}",
        (1, 3): "0",
        (1, 4): "0",
        (2, 1): f"-F(1,2)*r3*{_U}",
        (2, 2): "F(1,2)*(a+1)*(-2*a + a*b + b)/(a*S1)",
        (2, 3): "0",
        (2, 4): "0",
        (3, 1): "-F(1,8)*b*a**2*S2**3*S3**3*(a+1)*(a**2 + 6*b*a**2 + a + 13*a*b + 6*b)/S1**3",
        (3, 2): "-F(1,8)*r3*(3*a**2 + 2*b*a**2 + 7*a*b + 3*a + 2*b)*(a-1)*b*a**2*S3**3*S2**3/S1**3",
        (3, 3): "F(1,2)*(a + r3 + 2)*(a + 2 - r3)*b/(a*S1)",
        (3, 4): f"F(1,2)*r3*{_U}",
        (4, 1): "-F(1,8)*r3*(3*a**2 + 2*b*a**2 + 7*a*b + 3*a + 2*b)*(a-1)*b*a**2*S3**3*S2**3/S1**3",
        (4, 2): "-F(1,8)*b*a**2*S2**3*S3**3*(a+1)*(-5*a**2 + 2*b*a**2 - 5*a - 9*a*b + 2*b)/S1**3",
        (4, 3): f"F(1,2)*r3*{_U}",
        (4, 4): "-F(1,2)*(a + r3 + 2)*(a + 2 - r3)*b/(a*S1)",
    },
    "J": {
        (1, 1): f"-F(1,2)*r3*{_U}",
        (1, 2): "F(1,2)*(a+1)*(-2*a + a*b + b)/(a*S1)",
        (1, 3): "0",
        (1, 4): "0",
        (2, 1): "F(1,2)*(2*a + b + 6*a*b + 2*a**2 + b*a**2)/(a*S1)",
        (2, 2): f"F(1,2)*r3*{_U}",
        (2, 3): "0",
        (2, 4): "0",
        (3, 1): "-F(1,4)*r3*(a-1)*(a+1)**2*a**2*b**2*S2**3*S3**3/S1**3",
        (3, 2): "F(1,4)*b**2*a**2*S2**3*S3**3*(a+1)*(a**2 + 4*a + 1)/S1**3",
        (3, 3): f"F(1,2)*r3*{_U}",
        (3, 4): "-F(1,2)*(2*a + b + 6*a*b + 2*a**2 + b*a**2)/(a*S1)",
        (4, 1): "F(1,4)*b**2*a**2*S2**3*S3**3*(a+1)*(a**2 + 4*a + 1)/S1**3",
        (4, 2): "F(1,4)*r3*(a-1)*(a+1)**2*a**2*b**2*S2**3*S3**3/S1**3",
        (4, 3): "-F(1,2)*(a+1)*(-2*a + a*b + b)/(a*S1)",
        (4, 4): f"-F(1,2)*r3*{_U}",
    },
}


def _rational(x) -> Fraction:
    return x.a if isinstance(x, FieldElement) else Fraction(x)


def _evaluate_entry(expr: str, env: dict) -> FieldElement:
    val = eval(expr, {"__builtins__": {}}, env)  # table formulas only
    return FieldElement.coerce(val)


def table_matrix(name: str, m: MassParameters) -> Matrix:
    """Evaluate one transcribed table (``A``, ``R``, ``J`` or ``Ainf``) exactly."""
    d = derive_constants(m)
    # rational quantities stay Fractions; only r3 lifts a term into the field
    env = {
        "a": Fraction(m.alpha), "b": Fraction(m.beta),
        "S1": _rational(d.S1), "S2": _rational(d.S2), "S3": _rational(d.S3),
        "r3": SQRT3, "F": Fraction,
    }
    entries = TABLE[name]
    return Matrix([[_evaluate_entry(entries[(i, j)], env) for j in range(1, 5)] for i in range(1, 5)])


def provenance(name: str, i: int, j: int) -> str:
    """Transcribed formula of entry ``(i, j)`` (1-based) of table ``name``."""
    return f"{name}[{i},{j}] = {TABLE[name][(i, j)]}"


class PoleError(ValueError):
    """Evaluation requested at a pole of the system."""


@dataclass
class FuchsianSystem:
    """``dx/dt = (resA/(t-t0) + resB/(t-t1) + resC/(t-t2)) x``."""

    masses: MassParameters | None
    poles: tuple
    resA: Matrix
    resB: Matrix
    resC: Matrix
    label: str = "table"
    _numeric: tuple = field(default=None, repr=False, compare=False)

    def numeric(self):
        """``(poles, residues)`` as complex numpy arrays (cached)."""
        if self._numeric is None:
            poles = np.array([field_eval(t) for t in self.poles], dtype=complex)
            res = np.array([self.resA.to_numpy(), self.resB.to_numpy(), self.resC.to_numpy()])
            self._numeric = (poles, res)
        return self._numeric

    @property
    def R(self) -> Matrix:
        return self.resB.map(lambda x: x.real)

    @property
    def J(self) -> Matrix:
        return self.resB.map(lambda x: x.imag)

    def min_gap(self) -> float:
        p, _ = self.numeric()
        return float(min(abs(p[i] - p[j]) for i in range(3) for j in range(i + 1, 3)))

    def with_numeric_residues(self, resA, resB, resC, label="perturbed"):
        """Copy whose numeric residues are replaced (exact data is kept for reporting)."""
        out = FuchsianSystem(self.masses, self.poles, self.resA, self.resB, self.resC, label)
        poles, _ = self.numeric()
        out._numeric = (poles, np.array([resA, resB, resC], dtype=complex))
        return out


def residue_matrices(m: MassParameters) -> FuchsianSystem:
    sp = singular_points(m, 1)
    A = table_matrix("A", m)
    R = table_matrix("R", m)
    J = table_matrix("J", m)
    B = R + J * I
    C = R - J * I
    return FuchsianSystem(m, (sp.t0, sp.t1, sp.t2), A, B, C)


def rhs(sys: FuchsianSystem, t) -> np.ndarray:
    poles, res = sys.numeric()
    t = complex(t)
    d = t - poles
    if np.any(d == 0):
        raise PoleError(f"t = {t} is a pole")
    return res[0] / d[0] + res[1] / d[1] + res[2] / d[2]


def a_infinity(sys: FuchsianSystem) -> Matrix:
    """``-(A + B + C)``, the residue at infinity up to sign convention."""
    return -(sys.resA + sys.resB + sys.resC)


# -- structural verification ---------------------------------------------

L_VAR = "l"


def _poly_from_roots(roots):
    lam = MultiPoly.var(L_VAR)
    out = MultiPoly.constant(1, (L_VAR,))
    for r in roots:
        out = out * (lam - FieldElement.coerce(r))
    return out


EXPECTED_CHARPOLY_A = _poly_from_roots([0, 0, -1, -1])
EXPECTED_CHARPOLY_BC = _poly_from_roots([-2, -1, 0, 1])


@dataclass
class ResidueReport:
    charpoly_A: MultiPoly
    charpoly_B: MultiPoly
    charpoly_C: MultiPoly
    charpoly_Ainf: MultiPoly
    trace_Ainf: FieldElement
    A_real: bool
    C_is_conj_B: bool
    poles_conjugate: bool
    A_ok: bool
    BC_ok: bool
    Ainf_matches_table: bool

    @property
    def passed(self) -> bool:
        return all((self.A_real, self.C_is_conj_B, self.poles_conjugate,
                    self.A_ok, self.BC_ok, self.Ainf_matches_table, self.trace_Ainf == 6))


def structural_checks(sys: FuchsianSystem) -> ResidueReport:
    cpA = charpoly(sys.resA, L_VAR)
    cpB = charpoly(sys.resB, L_VAR)
    cpC = charpoly(sys.resC, L_VAR)
    ainf = a_infinity(sys)
    cpI = charpoly(ainf, L_VAR)
    table_ok = sys.masses is not None and ainf == table_matrix("Ainf", sys.masses)
    return ResidueReport(
        charpoly_A=cpA, charpoly_B=cpB, charpoly_C=cpC, charpoly_Ainf=cpI,
        trace_Ainf=ainf.trace(),
        A_real=all(x.is_real() for r in sys.resA for x in r),
        C_is_conj_B=sys.resC == sys.resB.conjugate(),
        poles_conjugate=sys.poles[2] == sys.poles[1].conjugate(),
        A_ok=cpA == EXPECTED_CHARPOLY_A,
        BC_ok=cpB == EXPECTED_CHARPOLY_BC and cpC == EXPECTED_CHARPOLY_BC,
        Ainf_matches_table=table_ok,
    )


def ainf_eigenvalues(sys: FuchsianSystem) -> np.ndarray:
    return np.linalg.eigvals(a_infinity(sys).to_numpy())


# -- cross-check against the dynamics-derived oracle ----------------------

def default_sample_points(sys: FuchsianSystem, n: int = 20) -> list:
    """Deterministic regular points on two circles around the pole triangle."""
    poles, _ = sys.numeric()
    centre = poles.mean()
    gap = sys.min_gap()
    radius = max(abs(p - centre) for p in poles)
    pts = []
    for j in range(n):
        rho = radius + (0.35 + 0.5 * (j % 2)) * gap
        ang = 2 * math.pi * (j + 0.5) / n
        pts.append(complex(centre + rho * complex(math.cos(ang), math.sin(ang))))
    return pts


def balance_scale(sys: FuchsianSystem) -> float:
    """Scale ``s`` such that ``D^{-1} M D`` with ``D = diag(1, 1, s, s)`` has
    off-diagonal blocks of comparable size (geometric mean balancing)."""
    _, res = sys.numeric()
    upper = max(np.abs(res[:, :2, 2:]).max(), 1e-300)
    lower = max(np.abs(res[:, 2:, :2]).max(), 1e-300)
    return float(math.sqrt(upper / lower))


def _balanced(M, s):
    out = M.copy()
    out[:2, 2:] /= s
    out[2:, :2] *= s
    return out


@dataclass
class CrosscheckResult:
    max_deviation: float
    max_balanced_deviation: float
    tol: float
    samples: int

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tol and self.max_balanced_deviation < self.tol


def derivation_crosscheck(m: MassParameters, sample_points=None, tol=1e-6, sys=None,
                          oracle=None) -> CrosscheckResult:
    """Compare the table-built coefficient matrix with the one derived from the
    Hamiltonian by automatic differentiation.

    Besides the plain relative deviation ``|rhs - oracle| / |rhs|`` the check
    also reports it after diagonal balancing, so that small entries (which
    span many orders of magnitude for small masses) are tested too.
    """
    from .dynamics.orbit import fuchsian_transform

    sys = sys if sys is not None else residue_matrices(m)
    oracle = oracle if oracle is not None else (lambda t: fuchsian_transform(t, m))
    pts = sample_points if sample_points is not None else default_sample_points(sys)
    s = balance_scale(sys)
    worst = worst_bal = 0.0
    for t in pts:
        a = rhs(sys, t)
        b = oracle(t)
        worst = max(worst, np.linalg.norm(a - b) / np.linalg.norm(a))
        ab, bb = _balanced(a, s), _balanced(b, s)
        worst_bal = max(worst_bal, np.linalg.norm(ab - bb) / np.linalg.norm(ab))
    return CrosscheckResult(float(worst), float(worst_bal), tol, len(pts))


def contour_residue(f, centre, radius, nodes=256) -> np.ndarray:
    """``(1/2 pi i) * contour integral of f`` on a circle (trapezoidal rule)."""
    acc = 0
    for j in range(nodes):
        e = np.exp(2j * math.pi * j / nodes)
        acc = acc + f(centre + radius * e) * (radius * e)
    return acc / nodes
