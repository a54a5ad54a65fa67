# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled Dormand-Prince 5(4) kernel (same algorithm as ``_rk_py``)."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, pow, cos, sin, fabs

from nonint.monodromy._errors import StepUnderflow

cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9
cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176
cdef double A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784
cdef double B6 = 11.0 / 84
cdef double E1 = 71.0 / 57600, E3 = -71.0 / 16695, E4 = 71.0 / 1920, E5 = -17253.0 / 339200
cdef double E6 = 22.0 / 525, E7 = -1.0 / 40
cdef double SAFETY = 0.9, FAC_MIN = 0.2, FAC_MAX = 5.0
cdef long MAX_STEPS = 200000

ctypedef double complex cplx




cdef inline double cabs2(cplx z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef void point(cplx* seg, double s, cplx* t, cplx* dt) nogil:
    cdef double r, th0, th1, th
    cdef cplx e
    if <int> seg[0].real == 0:
        t[0] = seg[1] + s * (seg[2] - seg[1])
        dt[0] = seg[2] - seg[1]
    else:
        r = seg[2].real
        th0 = seg[3].real
        th1 = seg[3].imag
        th = th0 + s * (th1 - th0)
        e = cos(th) + 1j * sin(th)
        t[0] = seg[1] + r * e
        dt[0] = 1j * r * (th1 - th0) * e


cdef void deriv(cplx* poles, cplx* res, cplx* seg, double s, cplx* y, cplx* out) nogil:
    cdef cplx t, dt, w0, w1, w2, acc
    cdef cplx m[16]
    cdef int i, j, k
    point(seg, s, &t, &dt)
    w0 = dt / (t - poles[0])
    w1 = dt / (t - poles[1])
    w2 = dt / (t - poles[2])
    for i in range(16):
        m[i] = res[i] * w0 + res[16 + i] * w1 + res[32 + i] * w2
    for i in range(4):
        for j in range(4):
            acc = 0
            for k in range(4):
                acc = acc + m[4 * i + k] * y[4 * k + j]
            out[4 * i + j] = acc


def integrate_segments(poles, res, segs, y0, double rtol, double atol,
                       double h0=0.05, double hmin=1e-13):
    """Transport ``y0`` along ``segs``; return ``(y, accepted, rejected)``."""
    cdef cnp.ndarray[cplx, ndim=1] P = np.ascontiguousarray(poles, dtype=complex).ravel()
    cdef cnp.ndarray[cplx, ndim=1] R = np.ascontiguousarray(res, dtype=complex).ravel()
    cdef cnp.ndarray[cplx, ndim=2] S = np.ascontiguousarray(segs, dtype=complex).reshape(-1, 4)
    cdef cnp.ndarray[cplx, ndim=1] Y = np.array(y0, dtype=complex).ravel()
    cdef cplx k1[16]
    cdef cplx k2[16]
    cdef cplx k3[16]
    cdef cplx k4[16]
    cdef cplx k5[16]
    cdef cplx k6[16]
    cdef cplx k7[16]
    cdef cplx tmp[16]
    cdef cplx ynew[16]
    cdef cplx* y = &Y[0]
    cdef cplx* seg
    cdef long accepted = 0, rejected = 0
    cdef double h = h0, s, err, sc, fac, a, b
    cdef bint last
    cdef int i, n
    for n in range(S.shape[0]):
        seg = &S[n, 0]
        s = 0.0
        deriv(&P[0], &R[0], seg, s, y, k1)
        while s < 1.0:
            if accepted + rejected > MAX_STEPS:
                raise StepUnderflow("step budget exhausted")
            last = s + h >= 1.0
            if last:
                h = 1.0 - s
            for i in range(16):
                tmp[i] = y[i] + h * (A21 * k1[i])
            deriv(&P[0], &R[0], seg, s + C2 * h, tmp, k2)
            for i in range(16):
                tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i])
            deriv(&P[0], &R[0], seg, s + C3 * h, tmp, k3)
            for i in range(16):
                tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i])
            deriv(&P[0], &R[0], seg, s + C4 * h, tmp, k4)
            for i in range(16):
                tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i])
            deriv(&P[0], &R[0], seg, s + C5 * h, tmp, k5)
            for i in range(16):
                tmp[i] = y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i]
                                     + A65 * k5[i])
            deriv(&P[0], &R[0], seg, s + h, tmp, k6)
            for i in range(16):
                ynew[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i]
                                      + B6 * k6[i])
            deriv(&P[0], &R[0], seg, 1.0 if last else s + h, ynew, k7)
            err = 0.0
            for i in range(16):
                a = sqrt(cabs2(y[i]))
                b = sqrt(cabs2(ynew[i]))
                sc = atol + rtol * (a if a > b else b)
                tmp[i] = h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i]
                              + E7 * k7[i])
                err += cabs2(tmp[i]) / (sc * sc)
            err = sqrt(err / 16.0)
            if err <= 1.0:
                s = 1.0 if last else s + h
                for i in range(16):
                    y[i] = ynew[i]
                    k1[i] = k7[i]
                accepted += 1
                if err == 0.0:
                    fac = FAC_MAX
                else:
                    fac = SAFETY * pow(err, -0.2)
                    if fac > FAC_MAX:
                        fac = FAC_MAX
            else:
                rejected += 1
                fac = SAFETY * pow(err, -0.2)
                if fac < FAC_MIN:
                    fac = FAC_MIN
            h = h * fac
            if h < hmin:
                raise StepUnderflow("step size %.3g below %.3g at s=%.6g" % (h, hmin, s))
    return Y.reshape(4, 4), accepted, rejected
