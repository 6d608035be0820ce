"""Pure-Python (numpy) implementation of the hot summation kernels.

Used when the compiled ``_ckernels`` extension is unavailable, or when
``CASIMIR_PISTON_PURE=1`` is set. Every function here has the same
signature and semantics as its Cython counterpart in ``_ckernels.pyx``.
"""
import math

import numpy as np

EULER_GAMMA = 0.5772156649015329
K_UNDERFLOW = 700.0

# Kernel kinds understood by both backends.
KERNEL_EXP = 0
KERNEL_GAUSS = 1

# Upper bound on flattened (mode, term) pairs held in memory at once.
_CHUNK = 1 << 21


def bessel_k0k1(x):
    """Modified Bessel functions K0 and K1 for an array of positive reals.

    Ascending series for ``x <= 2`` and Steed's continued fraction
    (Temme's CF2 at order zero) above that. Arguments beyond 700 return
    exactly zero.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    k0 = np.zeros_like(x)
    k1 = np.zeros_like(x)

    small = x <= 2.0
    if np.any(small):
        xs = x[small]
        y = 0.25 * xs * xs
        lg = np.log(0.5 * xs)
        term = np.ones_like(xs)
        i0 = np.ones_like(xs)
        s0 = np.zeros_like(xs)
        harmonic = 0.0
        for k in range(1, 20):
            term = term * y / (k * k)
            harmonic += 1.0 / k
            i0 += term
            s0 += term * harmonic
        k0[small] = -(lg + EULER_GAMMA) * i0 + s0

        term = np.ones_like(xs)
        i1 = np.ones_like(xs)
        s1 = np.full_like(xs, 1.0 - 2.0 * EULER_GAMMA)
        harmonic = 0.0
        for k in range(1, 20):
            term = term * y / (k * (k + 1))
            harmonic += 1.0 / k
            i1 += term
            s1 += term * (2.0 * harmonic + 1.0 / (k + 1) - 2.0 * EULER_GAMMA)
        k1[small] = 1.0 / xs + lg * 0.5 * xs * i1 - 0.25 * xs * s1

    mid = (~small) & (x <= K_UNDERFLOW)
    if np.any(mid):
        xm = x[mid]
        b = 2.0 * (1.0 + xm)
        d = 1.0 / b
        h = d.copy()
        delh = d.copy()
        q1 = np.zeros_like(xm)
        q2 = np.ones_like(xm)
        a1 = 0.25
        q = np.full_like(xm, a1)
        c = a1
        a = -a1
        s = 1.0 + q * delh
        for i in range(2, 400):
            a -= 2 * (i - 1)
            c = -a * c / i
            qnew = (q1 - b * q2) / a
            q1 = q2
            q2 = qnew
            q = q + c * qnew
            b = b + 2.0
            d = 1.0 / (b + a * d)
            delh = (b * d - 1.0) * delh
            h = h + delh
            dels = q * delh
            s = s + dels
            if np.all(np.abs(dels) < 1e-17 * np.abs(s)):
                break
        h = a1 * h
        kmu = np.sqrt(math.pi / (2.0 * xm)) * np.exp(-xm) / s
        k0[mid] = kmu
        k1[mid] = kmu * (xm + 0.5 - h) / xm
    return k0, k1


def _chunks(counts):
    """Yield (start, stop) mode ranges holding at most ``_CHUNK`` terms."""
    n = len(counts)
    start = 0
    while start < n:
        total = 0
        stop = start
        while stop < n and (total == 0 or total + counts[stop] <= _CHUNK):
            total += counts[stop]
            stop += 1
        yield start, stop
        start = stop


def _segment_sums(values, counts):
    out = np.zeros(len(counts))
    nz = counts > 0
    if not np.any(nz):
        return out
    offsets = np.concatenate(([0], np.cumsum(counts[nz])[:-1]))
    out[nz] = np.add.reduceat(values, offsets)
    return out


def _flat_index(counts):
    """Mode index and 1-based term index for every (mode, term) pair."""
    owner = np.repeat(np.arange(len(counts)), counts)
    starts = np.concatenate(([0], np.cumsum(counts)[:-1]))
    term = np.arange(owner.size) - np.repeat(starts, counts) + 1
    return owner, term


def t0_mode_sums(lam, L, nterms):
    """Per-mode ``lam**2 * sum_{n=1}^{N} [K0 + K2](2 n L lam)``."""
    lam = np.asarray(lam, dtype=float)
    nterms = np.asarray(nterms, dtype=np.int64)
    out = np.zeros(lam.size)
    for lo, hi in _chunks(nterms):
        counts = nterms[lo:hi]
        owner, n = _flat_index(counts)
        lp = lam[lo:hi][owner]
        z = 2.0 * n * L * lp
        k0, k1 = bessel_k0k1(z)
        vals = 2.0 * k0 + 2.0 * k1 / z
        out[lo:hi] = lam[lo:hi] ** 2 * _segment_sums(vals, counts)
    return out


def finite_t_mode_sums(lam, L, Lambda, mterms):
    """Per-mode ``g(0) + 2 sum_{m=1}^{M} g(m)``, ``g(m) = s/(exp(2Ls)-1)``.

    ``s = sqrt(m^2 Lambda^2 + lam^2)``.
    """
    lam = np.asarray(lam, dtype=float)
    mterms = np.asarray(mterms, dtype=np.int64)
    out = np.zeros(lam.size)
    with np.errstate(over="ignore"):
        g0 = lam / np.expm1(2.0 * L * lam)
        for lo, hi in _chunks(mterms):
            counts = mterms[lo:hi]
            owner, m = _flat_index(counts)
            lp = lam[lo:hi][owner]
            s = np.sqrt((m * Lambda) ** 2 + lp * lp)
            vals = s / np.expm1(2.0 * L * s)
            out[lo:hi] = g0[lo:hi] + 2.0 * _segment_sums(vals, counts)
    return out


def _kernel_values(kind, x):
    if kind == KERNEL_EXP:
        return np.exp(-x)
    if kind == KERNEL_GAUSS:
        return np.exp(-x * x)
    return np.asarray(kind(x), dtype=float)


def kernel_side_sums(lam, L, Q, nxmax, kind):
    """Per-mode one-sided kernel sum at T = 0.

    ``sum_{n=1}^{nxmax} n^2 K[(k_n^2 + lam^2)/Q] / (L^3 sqrt(k_n^2 + lam^2))``
    times ``pi**2``, with ``k_n = n pi / L``. ``kind`` is a kernel id or a
    vectorized callable.
    """
    lam = np.asarray(lam, dtype=float)
    nxmax = np.asarray(nxmax, dtype=np.int64)
    out = np.zeros(lam.size)
    for p in range(lam.size):
        n = nxmax[p]
        if n <= 0:
            continue
        k = np.arange(1, n + 1) * (math.pi / L)
        w2 = k * k + lam[p] * lam[p]
        vals = k * k * _kernel_values(kind, w2 / Q) / np.sqrt(w2)
        out[p] = np.sum(vals) / L
    return out
