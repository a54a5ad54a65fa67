"""Exact local (Frobenius) solutions at the finite singular points.

Near a pole ``t_p`` with ``s = t - t_p`` the system reads

    s x' = (R_p + sum_{j>=0} G_j s^(j+1)) x,
    G_j = sum_{k != p} (-1)^j res_k / (t_p - t_k)^(j+1).

The residue ``R_p`` is diagonalized exactly, ``R_p = V D V^-1``, with the
columns of ``V`` scaled to a leading coordinate 1.  In these coordinates a
resonance is a per-component condition, which keeps the bookkeeping of log
terms simple.

A solution is stored as ``Y = sum_m l_m(log s) y_m(s)`` with
``l_m = log^m / m!`` and Laurent polynomials ``y_m``.  Solutions are built in
descending exponent order as ``Y = u + sum_k kappa_k Lambda(Y_k)`` where
``Lambda(sum l_m y_m) = sum l_(m+1) y_m``; since
``s Lambda(Y)' - M Lambda(Y) = y_0`` the log-free part ``u`` solves

    ((rho+n) - D) u_n = sum_j G_j u_(n-1-j) - sum_k kappa_k y^k_0[rho+n].

At a resonance ``rho + n = mu_i`` component ``i`` of the right side must vanish,
which fixes ``kappa`` for the earlier solution seeded in direction ``i``;
the free component of ``u_n`` is set to zero.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exactalg import (
    I, ONE, ZERO, FieldElement, Matrix, MultiPoly, charpoly, field_eval, inverse,
    nullspace,
)
from .fuchsian import FuchsianSystem, a_infinity
from .model import derive_constants

POLE_NAMES = ("t0", "t1", "t2")


class FrobeniusError(ValueError):
    """Unsupported local structure or invalid request."""


# -- exponents ------------------------------------------------------------------

def _univariate(p: MultiPoly, var="l"):
    """Coefficient list (ascending) of a univariate polynomial."""
    deg = p.degree(var)
    out = []
    for k in range(deg + 1):
        c = p.coeff(var, k)
        out.append(c.constant_value() if c.terms else ZERO)
    return out


def _divide_root(coeffs, r):
    """Synthetic division by ``(l - r)``; returns quotient and remainder."""
    n = len(coeffs) - 1
    q = [ZERO] * n
    acc = ZERO
    for k in range(n, 0, -1):
        acc = coeffs[k] + acc * r
        q[k - 1] = acc
    rem = coeffs[0] + acc * r
    return q, rem


@dataclass
class Exponents:
    values: list        # exact integers (sorted descending) or complex numbers
    exact: bool
    charpoly: MultiPoly

    def multiset(self):
        return sorted(self.values, key=lambda v: (-complex(v).real, -complex(v).imag))


def _integer_roots(cp: MultiPoly, bound: int = 16):
    coeffs = _univariate(cp)
    roots = []
    r = bound
    while r >= -bound and len(coeffs) > 1:
        q, rem = _divide_root(coeffs, FieldElement(r))
        if rem == 0:
            roots.append(r)
            coeffs = q
        else:
            r -= 1
    return roots, len(coeffs) - 1


def _residue(sys: FuchsianSystem, pole):
    if pole in ("inf", "infinity", math.inf):
        return a_infinity(sys)
    idx = POLE_NAMES.index(pole) if isinstance(pole, str) else int(pole)
    return (sys.resA, sys.resB, sys.resC)[idx]


def local_exponents(sys: FuchsianSystem, pole) -> Exponents:
    """Eigenvalues of the residue at ``pole`` (``"t0"``, ``"t1"``, ``"t2"`` or ``"inf"``).

    Integer roots are found exactly; when the characteristic polynomial does
    not split over the integers the remaining roots are numerical and the
    result is flagged inexact.
    """
    R = _residue(sys, pole)
    cp = charpoly(R)
    roots, left = _integer_roots(cp)
    if left == 0:
        return Exponents(sorted(roots, reverse=True), True, cp)
    ev = np.linalg.eigvals(R.to_numpy())
    return Exponents(sorted(ev.tolist(), key=lambda z: (-z.real, -z.imag)), False, cp)


# -- series -------------------------------------------------------------------

def _vadd(a, b):
    return [x + y for x, y in zip(a, b)]


def _vscale(c, v):
    return [c * x for x in v]


def _matvec(m, v):
    return [sum((m[i][k] * v[k] for k in range(len(v)) if v[k]), ZERO) for i in range(len(m))]


@dataclass
class LocalSolution:
    """``sum_m l_m(log s) sum_p s^p levels[m][p]`` in eigen-coordinates."""

    exponent: int
    seed: int                      # eigen-direction of the leading coefficient
    levels: dict                   # m -> {power: vector (z-coordinates)}
    kappas: dict = field(default_factory=dict)  # index of earlier solution -> kappa

    @property
    def has_log(self) -> bool:
        return any(m > 0 and any(any(x for x in v) for v in lev.values())
                   for m, lev in self.levels.items())

    def log_free(self):
        return self.levels[0]


@dataclass
class LocalExpansion:
    pole: str
    pole_value: FieldElement
    exponents: list
    order: int
    V: Matrix
    Vinv: Matrix
    D: list
    G: list                        # G_j in eigen-coordinates
    solutions: list
    obstructions: list             # (solution, earlier solution, kappa) for every resonance

    @property
    def log_solutions(self):
        return [k for k, s in enumerate(self.solutions) if s.has_log]

    def coefficient(self, k, m, p):
        """Vector coefficient of ``l_m s^p`` of solution ``k`` in x-coordinates."""
        z = self.solutions[k].levels.get(m, {}).get(p)
        if z is None:
            return [ZERO] * 4
        return _matvec(self.V.rows, z)

    def evaluate(self, t) -> np.ndarray:
        """Fundamental matrix (columns = solutions) at ``t``, principal log."""
        s = complex(t) - field_eval(self.pole_value)
        L = cmath.log(s)
        Vn = self.V.to_numpy()
        cols = []
        for sol in self.solutions:
            acc = np.zeros(4, dtype=complex)
            for m, lev in sol.levels.items():
                lm = L ** m / math.factorial(m)
                for p, z in lev.items():
                    acc = acc + lm * s ** p * np.array([field_eval(x) for x in z])
            cols.append(Vn @ acc)
        return np.array(cols).T

    def residual(self, k):
        """Exact coefficients of ``s Y' - M(s) Y`` by (level, power)."""
        sol = self.solutions[k]
        top = max(sol.levels)
        out = {}
        lo = sol.exponent
        hi = sol.exponent + self.order
        for m in range(top + 1):
            lev = sol.levels.get(m, {})
            up = sol.levels.get(m + 1, {})
            for p in range(lo, hi + 1):
                acc = [(FieldElement(p) - self.D[i]) * x for i, x in
                       enumerate(lev.get(p, [ZERO] * 4))]
                for j in range(p - lo):
                    v = lev.get(p - 1 - j)
                    if v is not None and j < len(self.G):
                        acc = [a - b for a, b in zip(acc, _matvec(self.G[j], v))]
                if p in up:
                    acc = _vadd(acc, up[p])
                out[(m, p)] = acc
        return out

    def residual_vanishes(self, k, through=None) -> bool:
        through = self.order - 2 if through is None else through
        lo = self.solutions[k].exponent
        return all(not any(v) for (m, p), v in self.residual(k).items() if p - lo <= through)


# Normalization coordinate of each seed at t1/t2, by exponent.  These are
# positions where the eigenvector of the residue is nonzero for every mass
# pair, so the normalization is uniform across the family (the first nonzero
# coordinate is not: the exponent-0 vector loses its first entry at alpha=1).
SEED_COORDINATE = {1: 2, 0: 1, -1: 2, -2: 0}


def _scale_to(v, pos):
    if not v[pos]:
        raise FrobeniusError(f"seed vanishes at normalization coordinate {pos}")
    inv = v[pos].inverse()
    return [x * inv for x in v]


def _expansion_data(sys: FuchsianSystem, idx: int, order: int):
    res = (sys.resA, sys.resB, sys.resC)
    tp = sys.poles[idx]
    R = res[idx]
    exps = local_exponents(sys, idx)
    if not exps.exact:
        raise FrobeniusError("non-integer exponents are not supported")
    distinct = sorted(set(exps.values), reverse=True)
    cols, D = [], []
    for mu in distinct:
        basis = nullspace(R - Matrix.identity(4) * FieldElement(mu))
        mult = exps.values.count(mu)
        if len(basis) != mult:
            raise FrobeniusError(f"residue not semisimple at exponent {mu}")
        if idx != 0:
            basis = [_scale_to(v, SEED_COORDINATE[mu]) for v in basis]
        cols += basis
        D += [FieldElement(mu)] * mult
    V = Matrix([[cols[j][i] for j in range(4)] for i in range(4)])
    Vinv = inverse(V)
    G = []
    dinv = {k: (tp - sys.poles[k]).inverse() for k in range(3) if k != idx}
    powers = {k: dinv[k] for k in dinv}
    sign = ONE
    for j in range(order):
        Gj = Matrix.zeros(4)
        for k in dinv:
            Gj = Gj + res[k] * (sign * powers[k])
        G.append((Vinv @ Gj @ V).rows)
        for k in powers:
            powers[k] = powers[k] * dinv[k]
        sign = -sign
    return tp, exps, V, Vinv, D, G


def _lambda(sol: LocalSolution, kappa, max_power):
    """``kappa * Lambda(sol)`` truncated at ``max_power``."""
    out = {}
    for m, lev in sol.levels.items():
        out[m + 1] = {p: _vscale(kappa, v) for p, v in lev.items() if p <= max_power}
    return out


def frobenius_basis(sys: FuchsianSystem, pole="t1", order: int = 30) -> LocalExpansion:
    """Four exact formal solutions at a finite pole, truncated at ``order``."""
    if order < 8:
        raise FrobeniusError("order must be at least 8")
    if pole in ("inf", "infinity"):
        raise FrobeniusError("expansion at infinity is not supported")
    idx = POLE_NAMES.index(pole) if isinstance(pole, str) else int(pole)
    tp, exps, V, Vinv, D, G = _expansion_data(sys, idx, order)
    span = max(exps.values) - min(exps.values)
    if order < span:
        raise FrobeniusError(f"order {order} cannot reach resonance gap {span}")
    sols: list[LocalSolution] = []
    obstructions = []
    for seed in range(4):
        rho = int(D[seed].a)
        u = {rho: [ONE if i == seed else ZERO for i in range(4)]}
        kappas = {}
        for n in range(1, order + 1):
            p = rho + n
            rhs = [ZERO] * 4
            for j in range(n):
                rhs = _vadd(rhs, _matvec(G[j], u[p - 1 - j]))
            for k, kap in kappas.items():
                v = sols[k].levels[0].get(p)
                if v is not None:
                    rhs = [a - kap * b for a, b in zip(rhs, v)]
            z = [ZERO] * 4
            for i in range(4):
                gap = FieldElement(p) - D[i]
                if gap:
                    z[i] = rhs[i] / gap
                    continue
                # resonance: kappa for the earlier solution seeded in direction i
                k = next(k for k, s in enumerate(sols) if s.seed == i)
                kap = rhs[i]
                kappas[k] = kap
                obstructions.append((seed, k, kap))
            u[p] = z
        levels = {0: u}
        top = rho + order
        for k, kap in kappas.items():
            if not kap:
                continue
            for m, lev in _lambda(sols[k], kap, top).items():
                tgt = levels.setdefault(m, {})
                for q, v in lev.items():
                    tgt[q] = _vadd(tgt[q], v) if q in tgt else v
        sols.append(LocalSolution(rho, seed, levels, kappas))
    return LocalExpansion(POLE_NAMES[idx], tp, exps.values, order, V, Vinv, D, G, sols,
                          obstructions)


# -- monodromy and log constants ------------------------------------------------

@dataclass
class LocalMonodromy:
    """``M = sum_b (2 pi i)^b / b! * N_b`` with exact ``N_b``."""

    terms: dict          # b -> Matrix

    def numeric(self) -> np.ndarray:
        out = np.zeros((4, 4), dtype=complex)
        for b, N in self.terms.items():
            out = out + (2j * math.pi) ** b / math.factorial(b) * N.to_numpy()
        return out

    def is_identity(self) -> bool:
        return all(N == (Matrix.identity(4) if b == 0 else Matrix.zeros(4))
                   for b, N in self.terms.items())


def local_monodromy(exp: LocalExpansion) -> LocalMonodromy:
    """Matrix of ``s -> e^{2 pi i} s`` on the local basis, ``Y~ = Y M``.

    Integer powers are unchanged and ``l_m(L + c) = sum_b l_(m-b)(L) c^b/b!``;
    the log-free parts of the basis have unit leading coefficients in their
    own eigen-direction and vanish in the directions of the other solutions
    at their exponents, so entry ``(j, k)`` is read off component ``seed_j``
    of the ``s^rho_j`` coefficient.
    """
    sols = exp.solutions
    depth = max(max(s.levels) for s in sols)
    terms = {}
    for b in range(depth + 1):
        rows = [[ZERO] * 4 for _ in range(4)]
        for k, sk in enumerate(sols):
            lev = sk.levels.get(b, {})
            for j, sj in enumerate(sols):
                v = lev.get(sj.exponent)
                if v is not None:
                    rows[j][k] = v[sj.seed]
        terms[b] = Matrix(rows)
    return LocalMonodromy(terms)


def closed_form_c1(m) -> Fraction:
    """The closed-form log constant ``9/4 b a^3 (b+2)^2 S2 / S1^3``."""
    a, b = m.alpha, m.beta
    return Fraction(9, 4) * b * a ** 3 * (b + 2) ** 2 * (a * b + a + b) / (a + b + 1) ** 3


def monic_gauge_factor(m) -> FieldElement:
    """Leading coefficient ``l1 z1 = 2 S2^3`` of ``L Z``.

    Measuring the q-block of the seeds against the monic polynomial
    ``L Z / (l1 z1)`` multiplies the exponent-0 and exponent-(-2) seeds by
    ``1 / (l1 z1)`` relative to the uniform normalization, hence divides
    ``C1`` and ``C2`` by this factor.
    """
    d = derive_constants(m)
    return FieldElement(2) * d.S2 ** 3


@dataclass
class LogCoefficients:
    """Log constants in the uniform seed normalization plus comparisons.

    ``ratio`` is ``C1`` over the closed form; ``monic_ratio`` is the same
    after switching to the monic gauge (see ``monic_gauge_factor``).
    """

    C1: FieldElement
    C2: FieldElement
    C3: FieldElement
    closed_form: Fraction | None
    ratio: FieldElement | None
    monic_ratio: FieldElement | None
    extra_log_terms: bool         # entries outside the printed pattern

    @property
    def c2_is_i_c1(self) -> bool:
        return self.C2 == I * self.C1

    @property
    def c1_nonzero(self) -> bool:
        return not self.C1.is_zero()


def log_coefficients(exp: LocalExpansion, masses=None) -> LogCoefficients:
    """``C1, C2, C3`` with ``M = I + 2 pi i (C1 E12 + C2 E34 + C3 E14)``.

    Basis order is by descending exponent: ``Y1, Y2, Y3, Y4`` with exponents
    ``1, 0, -1, -2``.  The constants depend on the seed scaling
    (``SEED_COORDINATE``); the comparison with the closed form reports exact
    ratios instead of asserting equality.
    """
    if exp.pole not in ("t1", "t2"):
        raise FrobeniusError("log constants are defined at t1 and t2")
    if not exp.log_solutions:
        raise FrobeniusError("expansion has no logarithmic solutions")
    M = local_monodromy(exp)
    N1 = M.terms.get(1, Matrix.zeros(4))
    C1, C2, C3 = N1[0, 1], N1[2, 3], N1[0, 3]
    extra = any(N1[i, j] for i in range(4) for j in range(4)
                if (i, j) not in ((0, 1), (2, 3), (0, 3)))
    extra = extra or any(any(x for r in N for x in r) for b, N in M.terms.items() if b >= 2)
    cf = ratio = monic = None
    if masses is not None:
        cf = closed_form_c1(masses)
        ratio = C1 / FieldElement(cf)
        monic = ratio / monic_gauge_factor(masses)
    return LogCoefficients(C1, C2, C3, cf, ratio, monic, extra)


# -- numerical consistency ----------------------------------------------------

@dataclass
class SeriesConsistency:
    deviation: float
    order: int
    fit: np.ndarray
    tol: float

    @property
    def passed(self) -> bool:
        return self.deviation < self.tol


def numeric_consistency(sys: FuchsianSystem, pole="t1", order: int = 30, distance=0.1,
                        tol: float = 1e-7, retry: bool = True) -> SeriesConsistency:
    """Compare the series fundamental matrix with the integrated one.

    The constant basis change ``K`` with ``Phi_series = Phi_ode K`` is fitted
    at ``t_a`` and tested at ``t_b``, both at ``distance * min_gap`` from the
    pole on the side facing away from the other poles.  Without the
    principal-log cut in between, the two bases must agree after the fit.
    With ``retry`` the order is doubled once if the tolerance is missed.
    """
    from .monodromy import Arc, PathSpec, transport

    exp = frobenius_basis(sys, pole, order)
    tp = field_eval(exp.pole_value)
    r = distance * sys.min_gap()
    # angles on the right of the pole keep away from the log cut (negative axis)
    ta = tp + r * cmath.exp(-0.5j)
    arc = Arc(tp, r, -0.5, 0.5)
    Pa = exp.evaluate(ta)
    Pb = exp.evaluate(arc.end)
    Tb = transport(sys, PathSpec(ta, (arc,)), 1e-13, y0=np.eye(4), clearance=0.5 * r).matrix
    # Phi_ode(t) = T(t) with T(ta) = I; K = Pa
    pred = Tb @ Pa
    dev = float(np.linalg.norm(pred - Pb) / np.linalg.norm(Pb))
    if dev >= tol and retry:
        return numeric_consistency(sys, pole, 2 * order, distance, tol, retry=False)
    return SeriesConsistency(dev, order, Pa, tol)


__all__ = [
    "Exponents", "FrobeniusError", "LocalExpansion", "LocalMonodromy", "LocalSolution",
    "LogCoefficients", "SeriesConsistency", "closed_form_c1", "frobenius_basis",
    "local_exponents", "local_monodromy", "log_coefficients", "monic_gauge_factor",
    "numeric_consistency",
]
