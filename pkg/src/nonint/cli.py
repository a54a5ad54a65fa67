"""Command-line front end: ``nonint inspect | certify | scan``.

Exit codes: 0 certified / success, 1 a check failed, 2 invalid input,
3 indeterminate verdict, 4 output not writable.  ``NONINT_LOG`` sets the log
level (e.g. ``INFO``, ``DEBUG``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exactalg import FieldElement, as_rational
from .model import MassError, MassParameters

log = logging.getLogger("nonint")

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INDETERMINATE, EXIT_IO = 0, 1, 2, 3, 4
CSV_HEADER = ["alpha", "beta", "theta", "lambda1", "lambda2", "relation_residual",
              "spectrum_err", "jordan_t1", "jordan_t2", "certified"]
TARGETS = ("constants", "residues", "monodromy", "frobenius", "orbit")


@dataclass(frozen=True)
class RunConfig:
    alpha: Fraction = Fraction(1)
    beta: Fraction = Fraction(1)
    k: Fraction = Fraction(1)
    tol: float | None = None
    order: int = 30
    grid: int = 4
    out: str | None = None
    fmt: str = "json"
    w: Fraction = Fraction(0)
    workers: int | None = None
    fault: str | None = None

    def masses(self) -> MassParameters:
        return MassParameters(self.alpha, self.beta)


# -- rendering ---------------------------------------------------------------

def render(x):
    """JSON-ready form: rationals as ``"p/q"``, field elements as
    ``{"exact": {...}, "re", "im"}``, complex numbers as ``{"re", "im"}``."""
    if isinstance(x, FieldElement):
        if x.is_rational():
            return str(x.a)
        z = complex(x)
        return {"exact": x.to_json(), "re": z.real, "im": z.imag}
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    if isinstance(x, np.ndarray):
        return [render(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): render(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [render(v) for v in x]
    if hasattr(x, "rows"):
        return [[render(v) for v in r] for r in x.rows]
    return str(x)


def matrix_json(M) -> list:
    M = np.asarray(M, dtype=complex)
    return [[{"re": float(v.real), "im": float(v.imag)} for v in row] for row in M]


def dumps(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=True) + "\n"


def factored_charpoly(roots, var="l") -> str:
    """``l^2*(l+1)^2`` style rendering of a polynomial with integer roots."""
    parts = []
    for r in sorted(set(roots), reverse=True):
        mult = roots.count(r)
        base = var if r == 0 else f"({var}{'-' if r > 0 else '+'}{abs(r)})"
        parts.append(base if mult == 1 else f"{base}^{mult}")
    return "*".join(parts)


# -- inspect ------------------------------------------------------------------

def inspect_constants(cfg: RunConfig) -> dict:
    from .model import derive_constants, lagrange_coefficients, singular_points, spectral_data

    m = cfg.masses()
    d = derive_constants(m)
    lc = lagrange_coefficients(m, cfg.k)
    sp = singular_points(m, cfg.k)
    sd = spectral_data(m)
    doc = {"S1": d.S1, "S2": d.S2, "S3": d.S3}
    for name in ("cA", "cB", "cC", "cD", "ea", "eb", "ec", "ed"):
        doc[name] = getattr(lc, name)
    doc["l1"], doc["l2"] = lc.lpoly
    doc["z1"], doc["z2"], doc["z3"] = lc.zpoly
    for name in ("w2", "w3", "w4", "t0", "t1", "t2"):
        doc[name] = getattr(sp, name)
    doc.update(theta=sd.theta, lambda1=sd.lambda1, lambda2=sd.lambda2,
               exponents_at_infinity=list(sd.exponents_at_infinity()))
    return doc


def inspect_residues(cfg: RunConfig) -> dict:
    from .frobenius import local_exponents
    from .fuchsian import a_infinity, ainf_eigenvalues, residue_matrices, structural_checks

    sys_ = residue_matrices(cfg.masses())
    rep = structural_checks(sys_)
    ea, eb = local_exponents(sys_, "t0"), local_exponents(sys_, "t1")
    return {
        "A": sys_.resA, "B": sys_.resB, "C": sys_.resC, "R": sys_.R, "J": sys_.J,
        "Ainf": a_infinity(sys_),
        "charpoly_A": factored_charpoly(ea.values), "charpoly_B": factored_charpoly(eb.values),
        "charpoly_A_expanded": str(rep.charpoly_A), "charpoly_B_expanded": str(rep.charpoly_B),
        "charpoly_C_expanded": str(rep.charpoly_C),
        "charpoly_Ainf_expanded": str(rep.charpoly_Ainf), "trace_Ainf": rep.trace_Ainf,
        "eigenvalues_Ainf": sorted(ainf_eigenvalues(sys_).tolist(), key=lambda z: (z.real, z.imag)),
        "checks": {"A_real": rep.A_real, "C_is_conj_B": rep.C_is_conj_B,
                   "poles_conjugate": rep.poles_conjugate, "A_ok": rep.A_ok, "BC_ok": rep.BC_ok,
                   "Ainf_matches_table": rep.Ainf_matches_table, "passed": rep.passed},
    }


def inspect_monodromy(cfg: RunConfig) -> dict:
    from .fuchsian import residue_matrices
    from .model import spectral_data
    from .monodromy import DEFAULT_TOL, monodromy_rep, spectrum_match, unipotent_structure

    m = cfg.masses()
    rep = monodromy_rep(residue_matrices(m), tol=cfg.tol or DEFAULT_TOL)
    sm = spectrum_match(rep.Tinf, spectral_data(m))
    return {
        "T0": matrix_json(rep.T0), "T1": matrix_json(rep.T1), "T2": matrix_json(rep.T2),
        "Tinf": matrix_json(rep.Tinf), "Tinf_from_relation": matrix_json(rep.Tinf_relation),
        "relation_residual": rep.relation_residual, "order": rep.order,
        "residuals": rep.residuals, "det_errors": rep.det_errors(),
        "jordan_T1": unipotent_structure(rep.T1).blocks,
        "jordan_T2": unipotent_structure(rep.T2).blocks,
        "spectrum_Tinf": sm.eigenvalues, "spectrum_targets": sm.targets,
        "spectrum_err": sm.max_distance, "metadata": rep.metadata,
    }


def inspect_frobenius(cfg: RunConfig) -> dict:
    from .frobenius import frobenius_basis, local_exponents, local_monodromy, log_coefficients
    from .fuchsian import residue_matrices

    m = cfg.masses()
    sys_ = residue_matrices(m)
    e0 = frobenius_basis(sys_, "t0", cfg.order)
    e1 = frobenius_basis(sys_, "t1", cfg.order)
    lc = log_coefficients(e1, m)
    inf = local_exponents(sys_, "inf")
    return {
        "order": cfg.order,
        "exponents": {"t0": e0.exponents, "t1": e1.exponents,
                      "inf": {"values": inf.values, "exact": inf.exact}},
        "log_solutions": {"t0": e0.log_solutions, "t1": e1.log_solutions},
        "t0_obstructions": [k for *_, k in e0.obstructions],
        "C1": lc.C1, "C2": lc.C2, "C3": lc.C3, "C2_equals_iC1": lc.c2_is_i_c1,
        "C1_closed_form": lc.closed_form, "C1_ratio": lc.ratio,
        "C1_monic_gauge_ratio": lc.monic_ratio,
        "local_monodromy_t0_identity": local_monodromy(e0).is_identity(),
        "local_monodromy_t1": matrix_json(local_monodromy(e1).numeric()),
    }


def inspect_orbit(cfg: RunConfig) -> dict:
    from .dynamics import lagrange_orbit, orbit_residual

    m = cfg.masses()
    s = lagrange_orbit(cfg.w, m, cfg.k)
    try:
        residual = orbit_residual(float(cfg.w), m, cfg.k)
    except ValueError:
        residual = None
    return {"w": cfg.w, "q": [s.q1, s.q2, s.q3], "p": [s.p1, s.p2, s.p3], "k": s.k,
            "residual": residual}


INSPECTORS = {"constants": inspect_constants, "residues": inspect_residues,
              "monodromy": inspect_monodromy, "frobenius": inspect_frobenius,
              "orbit": inspect_orbit}


def cmd_inspect(target: str, cfg: RunConfig) -> dict:
    body = INSPECTORS[target](cfg)
    return render({"kind": target, "alpha": cfg.alpha, "beta": cfg.beta, "k": cfg.k, **body})


# -- certify / scan -----------------------------------------------------------

def _certify_config(cfg: RunConfig):
    from .obstruction import CertifyConfig

    kw = {"order": cfg.order, "fault": cfg.fault}
    if cfg.tol is not None:
        kw["integration_tol"] = cfg.tol
    return CertifyConfig(**kw)


def exit_code(verdict: str) -> int:
    from .obstruction import CERTIFIED, INDETERMINATE

    return {CERTIFIED: EXIT_OK, INDETERMINATE: EXIT_INDETERMINATE}.get(verdict, EXIT_FAIL)


def cmd_certify(cfg: RunConfig):
    from .obstruction import certify

    cert = certify(cfg.masses(), _certify_config(cfg))
    return exit_code(cert.verdict), render(cert.to_json())


def grid_pairs(n: int):
    vals = [Fraction(i, n) for i in range(1, n + 1)]
    return [(a, b) for a in vals for b in vals if a <= b]


def _fmt_float(x) -> str:
    return repr(float(x))


def scan_cell(args) -> list:
    """One CSV row for ``(alpha, beta)``; pure function of its arguments."""
    alpha, beta, order, tol = args
    from .obstruction import CertifyConfig, certify
    from .model import spectral_data

    m = MassParameters(alpha, beta)
    kw = {"order": order}
    if tol is not None:
        kw["integration_tol"] = tol
    cert = certify(m, CertifyConfig(**kw))
    sd = spectral_data(m)

    def val(name, key=None):
        try:
            v = cert.check(name).value
        except StopIteration:
            return ""
        if key is not None:
            v = v.get(key, "") if isinstance(v, dict) else ""
        return v

    rel = val("relation")
    spec = val("spectrum_Tinf", "match")
    j1, j2 = val("jordan_T1"), val("jordan_T2")
    return [str(alpha), str(beta), str(sd.theta), _fmt_float(sd.lambda1),
            _fmt_float(sd.lambda2), _fmt_float(rel) if isinstance(rel, float) else "",
            _fmt_float(spec) if isinstance(spec, float) else "",
            "+".join(map(str, j1)) if isinstance(j1, list) else "",
            "+".join(map(str, j2)) if isinstance(j2, list) else "",
            "true" if cert.certified else "false"]


def cmd_scan(cfg: RunConfig):
    if cfg.grid < 2:
        raise ValueError("grid size must be at least 2")
    jobs = [(a, b, cfg.order, cfg.tol) for a, b in grid_pairs(cfg.grid)]
    workers = cfg.workers if cfg.workers is not None else min(len(jobs), os.cpu_count() or 1)
    if workers <= 1:
        rows = [scan_cell(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(scan_cell, jobs))
    rows.sort(key=lambda r: (Fraction(r[0]), Fraction(r[1])))
    return rows


def rows_to_records(row) -> dict:
    """Typed JSON record for one scan row."""
    rec = dict(zip(CSV_HEADER, row))
    for key in ("lambda1", "lambda2", "relation_residual", "spectrum_err"):
        rec[key] = float(rec[key]) if rec[key] != "" else None
    rec["certified"] = rec["certified"] == "true"
    return rec


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    w.writerows(rows)
    return buf.getvalue()


# -- argument handling ----------------------------------------------------------

def _rational(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", type=_rational, default=Fraction(1), help="mass ratio alpha")
    common.add_argument("--beta", type=_rational, default=Fraction(1), help="mass ratio beta")
    common.add_argument("--k", type=_rational, default=Fraction(1), help="angular momentum (k != 0)")
    common.add_argument("--tol", type=float, default=None, help="integration tolerance")
    common.add_argument("--order", type=int, default=30, help="series truncation order")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", dest="fmt", choices=("json", "csv"), default=None)

    p = argparse.ArgumentParser(prog="nonint", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    pi = sub.add_parser("inspect", parents=[common], help="show constants, matrices or series data")
    pi.add_argument("target", choices=TARGETS)
    pi.add_argument("--w", type=_rational, default=Fraction(0), help="orbit parameter")
    pc = sub.add_parser("certify", parents=[common], help="run the certificate for one mass pair")
    pc.add_argument("--fault-inject", dest="fault", default=None,
                    help="test hook: perturb a residue entry, e.g. residue:0:0:1e-3")
    ps = sub.add_parser("scan", parents=[common], help="certify a grid of mass pairs")
    ps.add_argument("--grid", type=int, default=4, help="grid size n (masses i/n)")
    ps.add_argument("--workers", type=int, default=None, help="parallel worker processes")
    return p


def _setup_logging():
    level = os.environ.get("NONINT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


def _emit(text: str, out: str | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def _writable(path: str) -> bool:
    if os.path.isdir(path):
        return False
    if os.path.exists(path):
        return os.access(path, os.W_OK)
    return os.access(os.path.dirname(os.path.abspath(path)), os.W_OK)


def main(argv=None) -> int:
    _setup_logging()
    args = build_parser().parse_args(argv)
    cfg = RunConfig(alpha=args.alpha, beta=args.beta, k=args.k, tol=args.tol, order=args.order,
                    grid=getattr(args, "grid", 4), out=args.out,
                    fmt=args.fmt or ("csv" if args.command == "scan" else "json"),
                    w=getattr(args, "w", Fraction(0)), workers=getattr(args, "workers", None),
                    fault=getattr(args, "fault", None))
    try:
        if cfg.k == 0:
            raise MassError("k must be nonzero")
        cfg.masses()
        if args.command == "inspect":
            return _emit(dumps(cmd_inspect(args.target, cfg)), cfg.out)
        if args.command == "certify":
            code, doc = cmd_certify(cfg)
            io_code = _emit(dumps(doc), cfg.out)
            return io_code or code
        if cfg.out is not None and not _writable(cfg.out):
            print(f"error: cannot write {cfg.out}", file=sys.stderr)
            return EXIT_IO
        rows = cmd_scan(cfg)
    except (MassError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if cfg.fmt == "json":
        text = dumps([rows_to_records(r) for r in rows])
    else:
        text = rows_to_csv(rows)
    io_code = _emit(text, cfg.out)
    if io_code:
        return io_code
    return EXIT_OK if all(r[-1] == "true" for r in rows) else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
