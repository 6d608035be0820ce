# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled summation kernels.

Mirrors ``_pykernels`` function for function. Inner sums use Neumaier
compensated summation and all loops release the GIL so callers may run
partitions of the spectrum on worker threads.
"""
import numpy as np

from libc.math cimport exp, expm1, fabs, log, sqrt, M_PI

cdef double EULER_GAMMA = 0.5772156649015329
cdef double K_UNDERFLOW = 700.0

KERNEL_EXP = 0
KERNEL_GAUSS = 1


cdef inline void _k0k1(double x, double *k0, double *k1) noexcept nogil:
    cdef double y, lg, term, i0, s0, harmonic, i1, s1
    cdef double b, d, h, delh, q1, q2, qnew, q, c, a, s, dels, kmu
    cdef double a1 = 0.25
    cdef int k, i
    if x <= 2.0:
        y = 0.25 * x * x
        lg = log(0.5 * x)
        term = 1.0
        i0 = 1.0
        s0 = 0.0
        harmonic = 0.0
        for k in range(1, 20):
            term = term * y / (k * k)
            harmonic += 1.0 / k
            i0 += term
            s0 += term * harmonic
        k0[0] = -(lg + EULER_GAMMA) * i0 + s0
        term = 1.0
        i1 = 1.0
        s1 = 1.0 - 2.0 * EULER_GAMMA
        harmonic = 0.0
        for k in range(1, 20):
            term = term * y / (k * (k + 1))
            harmonic += 1.0 / k
            i1 += term
            s1 += term * (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * EULER_GAMMA)
        k1[0] = 1.0 / x + lg * 0.5 * x * i1 - 0.25 * x * s1
        return
    if x > K_UNDERFLOW:
        k0[0] = 0.0
        k1[0] = 0.0
        return
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = d
    delh = d
    q1 = 0.0
    q2 = 1.0
    q = a1
    c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(2, 400):
        a -= 2 * (i - 1)
        c = -a * c / i
        qnew = (q1 - b * q2) / a
        q1 = q2
        q2 = qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if fabs(dels) < 1e-17 * fabs(s):
            break
    h = a1 * h
    kmu = sqrt(M_PI / (2.0 * x)) * exp(-x) / s
    k0[0] = kmu
    k1[0] = kmu * (x + 0.5 - h) / x


cdef inline void _neumaier(double v, double *s, double *c) noexcept nogil:
    cdef double t = s[0] + v
    if fabs(s[0]) >= fabs(v):
        c[0] += (s[0] - t) + v
    else:
        c[0] += (v - t) + s[0]
    s[0] = t


def bessel_k0k1(x):
    cdef const double[::1] xv = np.ascontiguousarray(np.atleast_1d(x), dtype=np.float64)
    cdef Py_ssize_t n = xv.shape[0], i
    out0 = np.empty(n)
    out1 = np.empty(n)
    cdef double[::1] o0 = out0
    cdef double[::1] o1 = out1
    with nogil:
        for i in range(n):
            _k0k1(xv[i], &o0[i], &o1[i])
    return out0, out1


def t0_mode_sums(lam, double L, nterms):
    cdef const double[::1] lv = np.ascontiguousarray(lam, dtype=np.float64)
    cdef const long long[::1] nv = np.ascontiguousarray(nterms, dtype=np.int64)
    cdef Py_ssize_t p, npm = lv.shape[0]
    cdef long long n
    cdef double z, k0, k1, s, c
    out = np.zeros(npm)
    cdef double[::1] ov = out
    with nogil:
        for p in range(npm):
            s = 0.0
            c = 0.0
            for n in range(1, nv[p] + 1):
                z = 2.0 * n * L * lv[p]
                _k0k1(z, &k0, &k1)
                _neumaier(2.0 * k0 + 2.0 * k1 / z, &s, &c)
            ov[p] = lv[p] * lv[p] * (s + c)
    return out


def finite_t_mode_sums(lam, double L, double Lambda, mterms):
    cdef const double[::1] lv = np.ascontiguousarray(lam, dtype=np.float64)
    cdef const long long[::1] mv = np.ascontiguousarray(mterms, dtype=np.int64)
    cdef Py_ssize_t p, npm = lv.shape[0]
    cdef long long m
    cdef double sv, g0, s, c, l2
    out = np.zeros(npm)
    cdef double[::1] ov = out
    with nogil:
        for p in range(npm):
            l2 = lv[p] * lv[p]
            if 2.0 * L * lv[p] > 709.0:
                g0 = 0.0
            else:
                g0 = lv[p] / expm1(2.0 * L * lv[p])
            s = 0.0
            c = 0.0
            for m in range(1, mv[p] + 1):
                sv = sqrt(m * m * Lambda * Lambda + l2)
                if 2.0 * L * sv > 709.0:
                    break
                _neumaier(sv / expm1(2.0 * L * sv), &s, &c)
            ov[p] = g0 + 2.0 * (s + c)
    return out


def kernel_side_sums(lam, double L, double Q, nxmax, int kind):
    cdef const double[::1] lv = np.ascontiguousarray(lam, dtype=np.float64)
    cdef const long long[::1] nv = np.ascontiguousarray(nxmax, dtype=np.int64)
    cdef Py_ssize_t p, npm = lv.shape[0]
    cdef long long n, nmax = max(int(np.max(nxmax, initial=0)), 0)
    cdef double k, w2, x, kv, s, c, lw, step = M_PI / L
    # the exponential kernel factorizes: k^2 exp(-k^2/Q) is shared by all modes
    tab = np.zeros(nmax + 1)
    cdef double[::1] tv = tab
    if kind == 0:
        for n in range(1, nmax + 1):
            k = n * step
            tv[n] = k * k * exp(-k * k / Q)
    out = np.zeros(npm)
    cdef double[::1] ov = out
    with nogil:
        for p in range(npm):
            s = 0.0
            c = 0.0
            if kind == 0:
                lw = exp(-lv[p] * lv[p] / Q)
                for n in range(1, nv[p] + 1):
                    k = n * step
                    _neumaier(tv[n] / sqrt(k * k + lv[p] * lv[p]), &s, &c)
                ov[p] = lw * (s + c) / L
            else:
                for n in range(1, nv[p] + 1):
                    k = n * step
                    w2 = k * k + lv[p] * lv[p]
                    x = w2 / Q
                    _neumaier(k * k * exp(-x * x) / sqrt(w2), &s, &c)
                ov[p] = (s + c) / L
    return out
