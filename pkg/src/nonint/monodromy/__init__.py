"""Monodromy of the Fuchsian system by analytic continuation along loops.

Conventions
-----------
A loop ``gamma`` acts on a fundamental matrix by right multiplication,
``Sigma~ = Sigma T_gamma``.  With ``Sigma(tau) = I`` the matrix ``T_gamma``
is simply the transported value back at ``tau``, and following ``g1`` then
``g2`` gives ``T_{g1 g2} = T_{g2} T_{g1}``.

The integration kernel is compiled (``_rkcore``) when available and falls
back to the pure-Python ``_rk_py`` otherwise; ``BACKEND`` names the one in
use and ``NONINT_PURE_PYTHON=1`` forces the fallback.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from . import _rk_py
from ._errors import StepUnderflow

if os.environ.get("NONINT_PURE_PYTHON") == "1":
    _kernel, BACKEND = _rk_py, "python"
else:
    try:
        from . import _rkcore as _kernel
        BACKEND = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        _kernel, BACKEND = _rk_py, "python"

DEFAULT_TOL = 1e-12


class PathError(ValueError):
    """Invalid path: not closed, or too close to a pole."""


class ClearanceError(PathError):
    """The path comes closer to a pole than the required clearance."""


def kernel(name: str | None = None):
    """Integration kernel by name (``"cython"``, ``"python"``), default active one."""
    if name is None:
        return _kernel
    if name == "python":
        return _rk_py
    from . import _rkcore
    return _rkcore


# -- paths ------------------------------------------------------------------

@dataclass(frozen=True)
class Line:
    z0: complex
    z1: complex

    @property
    def start(self):
        return complex(self.z0)

    @property
    def end(self):
        return complex(self.z1)

    def row(self):
        return (0, self.z0, self.z1, 0)

    def distance_to(self, p: complex) -> float:
        d = self.z1 - self.z0
        if d == 0:
            return abs(p - self.z0)
        s = min(1.0, max(0.0, ((p - self.z0) * d.conjugate()).real / abs(d) ** 2))
        return abs(self.z0 + s * d - p)

    def length(self) -> float:
        return abs(self.z1 - self.z0)


@dataclass(frozen=True)
class Arc:
    centre: complex
    radius: float
    theta0: float
    theta1: float

    def at(self, th):
        return self.centre + self.radius * complex(math.cos(th), math.sin(th))

    @property
    def start(self):
        return self.at(self.theta0)

    @property
    def end(self):
        return self.at(self.theta1)

    def row(self):
        return (1, self.centre, self.radius, complex(self.theta0, self.theta1))

    def distance_to(self, p: complex) -> float:
        rel = p - self.centre
        ang = math.atan2(rel.imag, rel.real)
        lo, hi = sorted((self.theta0, self.theta1))
        if hi - lo >= 2 * math.pi:
            return abs(abs(rel) - self.radius)
        # closest point: the angle projection if inside the sweep, else an end
        cands = [self.start, self.end]
        for shift in (-2 * math.pi, 0.0, 2 * math.pi):
            if lo <= ang + shift <= hi:
                cands.append(self.at(ang + shift))
        return min(abs(c - p) for c in cands)

    def length(self) -> float:
        return abs(self.radius * (self.theta1 - self.theta0))


@dataclass(frozen=True)
class PathSpec:
    """Chain of line/arc pieces starting at ``base``."""

    base: complex
    segments: tuple
    counterclockwise: bool = True

    @property
    def end(self) -> complex:
        return self.segments[-1].end if self.segments else self.base

    def is_closed(self, tol: float = 1e-12) -> bool:
        return abs(self.end - self.base) <= tol * max(1.0, abs(self.base))

    def is_connected(self, tol: float = 1e-12) -> bool:
        pos = self.base
        for s in self.segments:
            if abs(s.start - pos) > tol * max(1.0, abs(pos)):
                return False
            pos = s.end
        return True

    def clearance(self, poles) -> float:
        return min(s.distance_to(complex(p)) for s in self.segments for p in poles)

    def length(self) -> float:
        return sum(s.length() for s in self.segments)

    def rows(self) -> np.ndarray:
        return np.array([s.row() for s in self.segments], dtype=complex)

    def reversed(self) -> "PathSpec":
        segs = []
        for s in reversed(self.segments):
            segs.append(Line(s.z1, s.z0) if isinstance(s, Line)
                        else Arc(s.centre, s.radius, s.theta1, s.theta0))
        return PathSpec(self.end, tuple(segs), not self.counterclockwise)

    def __add__(self, other: "PathSpec") -> "PathSpec":
        return PathSpec(self.base, self.segments + other.segments, self.counterclockwise)


def circle_path(centre: complex, radius: float, start_angle: float = 0.0,
                clockwise: bool = False) -> PathSpec:
    sweep = -2 * math.pi if clockwise else 2 * math.pi
    arc = Arc(complex(centre), float(radius), start_angle, start_angle + sweep)
    return PathSpec(arc.start, (arc,), not clockwise)


def keyhole(base: complex, pole: complex, radius: float, clockwise: bool = False) -> PathSpec:
    """Segment from ``base`` towards ``pole``, full circle, same segment back."""
    base, pole = complex(base), complex(pole)
    d = base - pole
    ang = math.atan2(d.imag, d.real)
    circ = circle_path(pole, radius, ang, clockwise)
    touch = circ.base
    return PathSpec(base, (Line(base, touch),) + circ.segments + (Line(touch, base),),
                    not clockwise)


def big_circle(base: complex, centre: complex, radius: float, clockwise: bool = True) -> PathSpec:
    """Segment from ``base`` out to a circle around ``centre``, full turn, back."""
    base, centre = complex(base), complex(centre)
    d = base - centre
    ang = math.atan2(d.imag, d.real) if d != 0 else 0.0
    circ = circle_path(centre, radius, ang, clockwise)
    return PathSpec(base, (Line(base, circ.base),) + circ.segments + (Line(circ.base, base),),
                    not clockwise)


# -- integration -------------------------------------------------------------

@dataclass
class Transport:
    matrix: np.ndarray
    accepted: int
    rejected: int


def _numeric(sys):
    poles, res = sys.numeric()
    return np.asarray(poles, dtype=complex), np.asarray(res, dtype=complex)


def default_clearance(sys) -> float:
    return 0.1 * sys.min_gap()


def transport(sys, path: PathSpec, tol: float = DEFAULT_TOL, y0=None, clearance=None,
              backend: str | None = None, scale: float | None = None) -> Transport:
    """Continue ``y0`` (default identity) along a possibly open path.

    ``scale`` integrates the similar system ``D^{-1} M D`` with
    ``D = diag(1, 1, s, s)`` and maps the result back; the default picks the
    scale balancing the off-diagonal blocks of the residues.
    """
    from ..fuchsian import balance_scale

    if not path.is_connected():
        raise PathError("path pieces are not joined end to end")
    poles, res = _numeric(sys)
    clr = default_clearance(sys) if clearance is None else clearance
    if path.segments and path.clearance(poles) < clr:
        raise ClearanceError(
            f"path clearance {path.clearance(poles):.3g} below required {clr:.3g}")
    s = balance_scale(sys) if scale is None else scale
    d = np.array([1.0, 1.0, s, s])
    rb = res * (d[None, None, :] / d[None, :, None])
    y = np.eye(4, dtype=complex) if y0 is None else np.asarray(y0, dtype=complex)
    yb = y / d[:, None] * d[None, :]
    if not path.segments:
        return Transport(y.copy(), 0, 0)
    try:
        out, acc, rej = kernel(backend).integrate_segments(poles, rb, path.rows(), yb, tol, tol)
    except StepUnderflow as exc:
        raise ClearanceError(str(exc)) from exc
    out = np.asarray(out) * d[:, None] / d[None, :]
    return Transport(out, int(acc), int(rej))


def integrate_along(sys, path: PathSpec, tol: float = DEFAULT_TOL, **kw) -> np.ndarray:
    """Fundamental matrix at the end of a closed path, starting from ``I``."""
    if not path.is_closed():
        raise PathError("path is not closed")
    return transport(sys, path, tol, **kw).matrix


# -- monodromy --------------------------------------------------------------

@dataclass(frozen=True)
class Conventions:
    base: complex | None = None     # default t0 + 1
    keyhole_fraction: float = 0.25  # loop radius / min pole gap
    tol: float = DEFAULT_TOL


def base_point(sys, conv: Conventions = Conventions()) -> complex:
    if conv.base is not None:
        return complex(conv.base)
    poles, _ = _numeric(sys)
    return complex(poles[0] + 1)


def loop_path(sys, pole_index, conv: Conventions = Conventions()) -> PathSpec:
    poles, _ = _numeric(sys)
    tau = base_point(sys, conv)
    if pole_index in ("inf", math.inf, 3):
        radius = 4 * max(abs(p - tau) for p in poles) + 2
        return _big_loop(tau, radius)
    r = conv.keyhole_fraction * sys.min_gap()
    return keyhole(tau, poles[int(pole_index)], r)


def _big_loop(tau: complex, radius: float) -> PathSpec:
    # clockwise circle of the given radius through ``tau``-centred geometry:
    # go out along the positive real direction, turn once, come back
    arc = Arc(tau, radius, 0.0, -2 * math.pi)
    return PathSpec(tau, (Line(tau, arc.start), arc, Line(arc.end, tau)), False)


def loop_monodromy(sys, pole_index, conv: Conventions = Conventions(), **kw) -> np.ndarray:
    """``T`` for a positive loop around pole 0, 1, 2 or ``"inf"`` (clockwise)."""
    return integrate_along(sys, loop_path(sys, pole_index, conv), conv.tol, **kw)


ORDERS = {
    "T0*T1*T2*Tinf": (0, 1, 2, 3),
    "Tinf*T2*T1*T0": (3, 2, 1, 0),
}


@dataclass
class MonodromyRep:
    T0: np.ndarray
    T1: np.ndarray
    T2: np.ndarray
    Tinf: np.ndarray
    Tinf_relation: np.ndarray
    relation_residual: float
    order: str
    residuals: dict
    metadata: dict = field(default_factory=dict)

    def matrices(self):
        return {"T0": self.T0, "T1": self.T1, "T2": self.T2, "Tinf": self.Tinf}

    def det_errors(self) -> dict:
        return {k: float(abs(np.linalg.det(v) - 1)) for k, v in self.matrices().items()}


def basis_scaling(mats) -> np.ndarray:
    """Power-of-two diagonal ``d`` balancing ``sum |T|`` (exact to apply)."""
    from scipy.linalg import matrix_balance

    total = sum(np.abs(m) for m in mats)
    _, (d, _) = matrix_balance(total, permute=False, separate=True)
    return np.asarray(d, dtype=float)


def _relation(mats, order):
    prod = np.eye(4, dtype=complex)
    for i in order:
        prod = prod @ mats[i]
    return float(np.linalg.norm(prod - np.eye(4)))


def monodromy_rep(sys, tol: float = DEFAULT_TOL, conv: Conventions | None = None,
                  relation_tol: float = 1e-6, balance: bool = True, **kw) -> MonodromyRep:
    """All four generators from the common base point.

    With ``balance`` (default) the generators are expressed in the
    fundamental basis ``Sigma(tau) = D`` for a power-of-two diagonal ``D``,
    i.e. ``T -> D^{-1} T D``.  This is an exact change of basis; it keeps the
    relation check meaningful in double precision when the raw matrices have
    norms in the millions.  Raw-basis residuals are kept in ``metadata``.
    """
    conv = conv or Conventions(tol=tol)
    raw, steps = [], 0
    for idx in (0, 1, 2, "inf"):
        tr = transport(sys, loop_path(sys, idx, conv), conv.tol, **kw)
        raw.append(tr.matrix)
        steps += tr.accepted + tr.rejected
    d = basis_scaling(raw) if balance else np.ones(4)
    mats = [m * d[None, :] / d[:, None] for m in raw]
    residuals = {name: _relation(mats, o) for name, o in ORDERS.items()}
    first = next(iter(ORDERS))
    chosen = first if residuals[first] < relation_tol else min(residuals, key=residuals.get)
    o = ORDERS[chosen]
    prod = np.eye(4, dtype=complex)
    for i in o:
        if i != 3:
            prod = prod @ mats[i]
    tinf_rel = np.linalg.inv(prod)
    tau = base_point(sys, conv)
    meta = {"tol": conv.tol, "steps": steps, "backend": BACKEND,
            "base_point": [tau.real, tau.imag], "keyhole_fraction": conv.keyhole_fraction,
            "order": chosen, "basis_scaling": d.tolist(),
            "raw_relation_residual": _relation(raw, o),
            "raw_T0_deviation": float(np.linalg.norm(raw[0] - np.eye(4)))}
    return MonodromyRep(mats[0], mats[1], mats[2], mats[3], tinf_rel,
                        residuals[chosen], chosen, residuals, meta)


# -- Jordan structure ---------------------------------------------------------

@dataclass
class JordanProfile:
    blocks: list
    ranks: list
    singular_values: list
    margins: list
    indeterminate: bool = False
    eigenvalue: complex = 1.0

    @property
    def is_22(self) -> bool:
        return not self.indeterminate and sorted(self.blocks) == [2, 2]


def _numerical_rank(m: np.ndarray, tol: float, scale: float, band: float):
    sv = np.linalg.svd(m, compute_uv=False)
    thr = tol * scale
    rank = int(np.sum(sv > thr))
    # ambiguous when some value sits within ``band`` decades of the threshold
    lo, hi = thr / band, thr * band
    amb = bool(np.any((sv > lo) & (sv < hi)))
    margin = float(min((abs(math.log10(max(v, 1e-300) / thr)) for v in sv), default=math.inf))
    return rank, sv, amb, margin


def unipotent_structure(T, tol: float = 1e-8, band: float = 10.0) -> JordanProfile:
    """Jordan profile of ``T`` at eigenvalue 1 from ranks of ``(T - I)^j``.

    Ranks use the threshold ``tol * max(1, sigma_max(T - I))``.  If a singular
    value falls within ``band`` of the threshold the profile is flagged
    indeterminate.
    """
    T = np.asarray(T, dtype=complex)
    n = T.shape[0]
    if T.shape != (n, n):
        raise ValueError("square matrix required")
    N = T - np.eye(n)
    scale = max(1.0, float(np.linalg.norm(N, 2)))
    ranks, svs, margins, amb = [n], [], [], False
    P = np.eye(n, dtype=complex)
    for j in range(1, n + 1):
        P = P @ N
        r, sv, a, mg = _numerical_rank(P, tol, scale ** j, band)
        ranks.append(r)
        svs.append(sv.tolist())
        margins.append(mg)
        amb = amb or a
        if r == ranks[-2] or r == 0:
            break
    # ranks r_j of N^j: number of blocks of size >= j is r_{j-1} - r_j
    ge = [ranks[j - 1] - ranks[j] for j in range(1, len(ranks))]
    blocks = []
    for j in range(len(ge)):
        nxt = ge[j + 1] if j + 1 < len(ge) else 0
        blocks += [j + 1] * (ge[j] - nxt)
    if sum(blocks) != n:
        # eigenvalues other than 1 are present (rank stagnates above zero)
        amb = amb or ranks[-1] == 0
    return JordanProfile(sorted(blocks, reverse=True), ranks[1:], svs, margins, amb)


# -- spectrum --------------------------------------------------------------

@dataclass
class SpectrumReport:
    eigenvalues: list
    targets: list
    max_distance: float
    distance_from_identity: float
    tol: float

    @property
    def passed(self) -> bool:
        return self.max_distance < self.tol and self.distance_from_identity > 0.1


def match_multisets(a, b) -> float:
    a, b = np.asarray(a, dtype=complex), np.asarray(b, dtype=complex)
    cost = np.abs(a[:, None] - b[None, :])
    r, c = linear_sum_assignment(cost)
    return float(cost[r, c].max())


def clustered_eigenvalues(T, radius: float = 1e-3) -> np.ndarray:
    """Eigenvalues with every cluster replaced by its mean.

    Eigenvalues of a defective cluster (a Jordan block) scatter like
    ``sqrt(eps)``, while the cluster mean, a trace over the invariant
    subspace, stays accurate to ``eps``.  Clusters are single-linkage groups
    with gaps below ``radius``.
    """
    ev = np.linalg.eigvals(np.asarray(T, dtype=complex))
    n = len(ev)
    label = list(range(n))

    def root(i):
        while label[i] != i:
            i = label[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(ev[i] - ev[j]) < radius:
                label[root(j)] = root(i)
    out = np.empty_like(ev)
    for i in range(n):
        members = [j for j in range(n) if root(j) == root(i)]
        out[i] = ev[members].mean()
    return out


def spectrum_match(Tinf, spec, tol: float = 1e-6) -> SpectrumReport:
    """Match eigenvalues of ``Tinf`` with ``exp(+-2 pi i lambda_{1,2})``."""
    ev = np.linalg.eigvals(np.asarray(Tinf, dtype=complex))
    targets = []
    for lam in (spec.lambda1, spec.lambda2):
        z = np.exp(2j * math.pi * float(lam))
        targets += [z, z.conjugate()]
    dist = match_multisets(ev, targets)
    ident = float(np.max(np.abs(ev - 1)))
    return SpectrumReport(ev.tolist(), targets, dist, ident, tol)


def liouville_check(sys, path: PathSpec, tol: float = DEFAULT_TOL, nodes: int = 2048) -> float:
    """``|det Sigma(end) - exp(int trace(rhs) dt)|`` relative to the latter."""
    poles, res = _numeric(sys)
    traces = np.array([np.trace(r) for r in res])
    total = 0j
    for seg in path.segments:
        # exact: trace integral is sum tr_k * (log continuation of t - p_k)
        for tr, p in zip(traces, poles):
            total += tr * _log_increment(seg, p, nodes)
    det = np.linalg.det(transport(sys, path, tol).matrix)
    ref = np.exp(total)
    return float(abs(det - ref) / abs(ref))


def _log_increment(seg, p, nodes):
    """Continuous change of ``log(t - p)`` along a segment."""
    if isinstance(seg, Line):
        zs = seg.z0 + np.linspace(0, 1, nodes + 1) * (seg.z1 - seg.z0)
    else:
        zs = seg.centre + seg.radius * np.exp(1j * np.linspace(seg.theta0, seg.theta1, nodes + 1))
    w = zs - p
    dang = np.angle(w[1:] / w[:-1])
    return complex(math.log(abs(w[-1]) / abs(w[0])), float(dang.sum()))


__all__ = [
    "BACKEND", "Arc", "ClearanceError", "Conventions", "JordanProfile", "Line",
    "MonodromyRep", "PathError", "PathSpec", "SpectrumReport", "StepUnderflow", "Transport",
    "base_point", "basis_scaling", "big_circle", "circle_path", "clustered_eigenvalues", "integrate_along", "keyhole", "kernel",
    "liouville_check", "loop_monodromy", "loop_path", "match_multisets", "monodromy_rep",
    "spectrum_match", "transport", "unipotent_structure",
]
