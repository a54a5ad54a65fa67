"""Compare the compiled and pure-Python integration kernels.

Runs the four generator loops of the monodromy representation with each
kernel and reports wall time, step counts and the largest entry-wise
difference between the two results.

Usage: python benchmarks/bench_integrate.py [--repeat N]
"""

import argparse
import time

import numpy as np

from nonint.fuchsian import residue_matrices
from nonint.model import MassParameters
from nonint.monodromy import loop_path, transport

MASSES = [("1", "1"), ("1/2", "1"), ("1/10", "1/5")]


def run(backend, sys, repeat):
    best, out = np.inf, None
    for _ in range(repeat):
        t = time.perf_counter()
        out = [transport(sys, loop_path(sys, idx), backend=backend) for idx in (0, 1, 2, "inf")]
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    try:
        from nonint.monodromy import _rkcore  # noqa: F401
    except ImportError:
        print("compiled kernel not built; nothing to compare")
        return 1
    print(f"{'alpha':>6} {'beta':>6} {'python [s]':>11} {'cython [s]':>11} {'speedup':>8} "
          f"{'steps':>6} {'max diff':>9}")
    for a, b in MASSES:
        sys = residue_matrices(MassParameters(a, b))
        tp, rp = run("python", sys, args.repeat)
        tc, rc = run("cython", sys, args.repeat)
        steps = sum(r.accepted for r in rc)
        diff = max(float(np.abs(x.matrix - y.matrix).max() / max(1.0, np.abs(x.matrix).max()))
                   for x, y in zip(rp, rc))
        print(f"{a:>6} {b:>6} {tp:11.4f} {tc:11.4f} {tp / tc:8.1f} {steps:6d} {diff:9.1e}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
