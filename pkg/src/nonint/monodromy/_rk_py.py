"""Pure-Python Dormand-Prince 5(4) kernel for ``dY/ds = M(t(s)) t'(s) Y``.

``M(t) = sum_k res[k] / (t - poles[k])`` and ``t(s)`` runs over a chain of
line and arc segments, each parametrized by ``s`` in ``[0, 1]``.  The
compiled kernel in ``_rkcore.pyx`` implements the same algorithm with the
same signature; this module is the fallback and the reference.

Segment rows are complex 4-vectors ``(kind, p0, p1, p2)``:

* line (kind 0): from ``p0`` to ``p1``;
* arc (kind 1): centre ``p0``, radius ``p1.real``, angles ``p2.real`` to
  ``p2.imag``.
"""

import math

import numpy as np

from ._errors import StepUnderflow

# Dormand-Prince tableau
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# 5th minus embedded 4th order weights
E1, E3, E4, E5, E6, E7 = (71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200,
                          22 / 525, -1 / 40)

SAFETY, FAC_MIN, FAC_MAX = 0.9, 0.2, 5.0
MAX_STEPS = 200_000




def _point(seg, s):
    kind = int(seg[0].real)
    if kind == 0:
        z0, z1 = seg[1], seg[2]
        return z0 + s * (z1 - z0), z1 - z0
    c, r = seg[1], seg[2].real
    th0, th1 = seg[3].real, seg[3].imag
    th = th0 + s * (th1 - th0)
    e = complex(math.cos(th), math.sin(th))
    return c + r * e, 1j * r * (th1 - th0) * e


def _deriv(poles, res, seg, s, y):
    t, dt = _point(seg, s)
    m = (res[0] * (dt / (t - poles[0])) + res[1] * (dt / (t - poles[1]))
         + res[2] * (dt / (t - poles[2])))
    return m @ y


def integrate_segments(poles, res, segs, y0, rtol, atol, h0=0.05, hmin=1e-13):
    """Transport ``y0`` along ``segs``; return ``(y, accepted, rejected)``."""
    poles = np.asarray(poles, dtype=complex)
    res = np.asarray(res, dtype=complex)
    y = np.array(y0, dtype=complex)
    accepted = rejected = 0
    h = h0
    for seg in np.asarray(segs, dtype=complex):
        s = 0.0
        k1 = _deriv(poles, res, seg, s, y)
        while s < 1.0:
            if accepted + rejected > MAX_STEPS:
                raise StepUnderflow("step budget exhausted")
            last = s + h >= 1.0
            if last:
                h = 1.0 - s
            k2 = _deriv(poles, res, seg, s + C2 * h, y + h * (A21 * k1))
            k3 = _deriv(poles, res, seg, s + C3 * h, y + h * (A31 * k1 + A32 * k2))
            k4 = _deriv(poles, res, seg, s + C4 * h, y + h * (A41 * k1 + A42 * k2 + A43 * k3))
            k5 = _deriv(poles, res, seg, s + C5 * h,
                        y + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4))
            k6 = _deriv(poles, res, seg, s + h,
                        y + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5))
            ynew = y + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
            k7 = _deriv(poles, res, seg, 1.0 if last else s + h, ynew)
            e = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
            sc = atol + rtol * np.maximum(np.abs(y), np.abs(ynew))
            err = math.sqrt(float(np.mean((np.abs(e) / sc) ** 2)))
            if err <= 1.0:
                s = 1.0 if last else s + h
                y = ynew
                k1 = k7
                accepted += 1
                fac = FAC_MAX if err == 0.0 else min(FAC_MAX, SAFETY * err ** -0.2)
            else:
                rejected += 1
                fac = max(FAC_MIN, SAFETY * err ** -0.2)
            h = h * fac
            if h < hmin:
                raise StepUnderflow(f"step size {h:.3g} below {hmin:.3g} at s={s:.6g}")
    return y, accepted, rejected
