# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the hot loops; same interface as _pykernels."""

import numpy as np
cimport numpy as cnp
from libc.float cimport DBL_EPSILON
from libc.math cimport fabs

cdef double XGK[8]
cdef double WGK[8]
cdef double WG[4]
XGK[:] = [0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
          0.207784955007898467600689403773245, 0.0]
WGK[:] = [0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
          0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
          0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
          0.204432940075298892414161999234649, 0.209482141084727828012999174891714]
WG[:] = [0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
         0.381830050505118944950369775488975, 0.417959183673469387755102040816327]

cdef enum:
    MAXSTACK = 256
    MAXEVALS = 4000  # rule applications per segment


cdef inline double _poly(const double* c, int n, double t) nogil:
    cdef double acc = 0.0
    cdef int i
    for i in range(n):
        acc = acc * t + c[i]
    return acc


cdef inline double _poly_abs(const double* c, int n, double t) nogil:
    cdef double acc = 0.0
    cdef int i
    for i in range(n):
        acc = acc * fabs(t) + fabs(c[i])
    return acc


cdef int _rule(const double* c, int nc, double a, double b, double* k, double* err,
               double* noise) nogil:
    # noise: rounding bound from evaluating P with cancellation at the nodes
    cdef double mid = 0.5 * (a + b), h = 0.5 * (b - a)
    cdef double g[3]
    cdef double t, p, w, e
    cdef int j, s, m
    noise[0] = 0.0
    for m in range(3):
        k[m] = 0.0
        g[m] = 0.0
    for j in range(8):
        for s in range(2):
            if j == 7 and s == 1:
                continue
            t = mid + (h * XGK[j] if s == 0 else -h * XGK[j])
            p = _poly(c, nc, t)
            if p <= 0.0:
                return 2
            w = 1.0 / p
            noise[0] += WGK[j] * w * (1.0 + t * t) * _poly_abs(c, nc, t) / p
            k[0] += WGK[j] * w
            k[1] += WGK[j] * w * t
            k[2] += WGK[j] * w * t * t
            if j % 2 == 1:
                g[0] += WG[j // 2] * w
                g[1] += WG[j // 2] * w * t
                g[2] += WG[j // 2] * w * t * t
    err[0] = 0.0
    noise[0] *= 4.0 * nc * DBL_EPSILON * fabs(h)
    for m in range(3):
        k[m] *= h
        e = fabs(k[m] - h * g[m])
        if e > err[0]:
            err[0] = e
    return 0


cdef int _segment(const double* c, int nc, double a, double b, double tol, int depth,
                  double* out) nogil:
    cdef double sa[MAXSTACK]
    cdef double sb[MAXSTACK]
    cdef int sd[MAXSTACK]
    cdef int top = 0, d, status = 0, m, evals = 0
    cdef double x0, x1, xm, err, kmax, accept, noise
    cdef double k[3]
    cdef double span = fabs(b - a)
    out[0] = 0.0
    out[1] = 0.0
    out[2] = 0.0
    if span == 0.0:
        return 0
    sa[0] = a
    sb[0] = b
    sd[0] = 0
    top = 1
    while top > 0:
        top -= 1
        x0 = sa[top]
        x1 = sb[top]
        d = sd[top]
        if _rule(c, nc, x0, x1, k, &err, &noise) != 0:
            return 2
        evals += 1
        kmax = fabs(k[0])
        for m in range(1, 3):
            if fabs(k[m]) > kmax:
                kmax = fabs(k[m])
        accept = tol * fabs(x1 - x0) / span
        if accept < 1e-15 * kmax:
            accept = 1e-15 * kmax
        if accept < noise:
            accept = noise
        if err <= accept or d >= depth or top + 2 > MAXSTACK or evals >= MAXEVALS:
            # accepted on rounding noise alone is fine only while the noise is small
            if err > accept or (err > tol * fabs(x1 - x0) / span and noise > 1e-6 * kmax):
                status = 1
            for m in range(3):
                out[m] += k[m]
        else:
            xm = 0.5 * (x0 + x1)
            sa[top] = xm
            sb[top] = x1
            sd[top] = d + 1
            sa[top + 1] = x0
            sb[top + 1] = xm
            sd[top + 1] = d + 1
            top += 2
    return status


def segment_integrals(coeffs, lo, hi, double tol=1e-10, int depth=40):
    cdef cnp.ndarray[double, ndim=1, mode="c"] c = np.ascontiguousarray(coeffs, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] a = np.ascontiguousarray(lo, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1, mode="c"] b = np.ascontiguousarray(hi, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], i
    cdef cnp.ndarray[double, ndim=2, mode="c"] out = np.zeros((n, 3))
    cdef int status = 0, s
    cdef int nc = c.shape[0]
    cdef double* cp = &c[0]
    with nogil:
        for i in range(n):
            s = _segment(cp, nc, a[i], b[i], tol, depth, &out[i, 0])
            if s == 2:
                status = 2
                break
            if s > status:
                status = s
    return out, status


def abreu_stencil(h11, h12, h22, double d1, double d2):
    cdef double[:, ::1] a = np.ascontiguousarray(h11, dtype=np.float64)
    cdef double[:, ::1] b = np.ascontiguousarray(h12, dtype=np.float64)
    cdef double[:, ::1] e = np.ascontiguousarray(h22, dtype=np.float64)
    cdef Py_ssize_t n = a.shape[0], m = a.shape[1], i, j
    out_arr = np.empty((n - 2, m - 2))
    cdef double[:, ::1] out = out_arr
    cdef double q11 = 1.0 / (d1 * d1), q22 = 1.0 / (d2 * d2), q12 = 1.0 / (4.0 * d1 * d2)
    with nogil:
        for i in range(1, n - 1):
            for j in range(1, m - 1):
                out[i - 1, j - 1] = -((a[i + 1, j] - 2.0 * a[i, j] + a[i - 1, j]) * q11
                                      + 2.0 * (b[i + 1, j + 1] - b[i + 1, j - 1]
                                               - b[i - 1, j + 1] + b[i - 1, j - 1]) * q12
                                      + (e[i, j + 1] - 2.0 * e[i, j] + e[i, j - 1]) * q22)
    return out_arr
