"""Reference values computed by routes that share no code with the package.

Quadrature, bisection and brute-force series only; nothing here imports
casimir_piston.
"""
import math
import warnings

import numpy as np
from scipy import integrate


def k0_quadrature(x):
    """K_0(x) = int_0^inf exp(-x cosh t) dt."""
    return kn_quadrature(0, x)


def kn_quadrature(n, x):
    """K_n(x) = int_0^inf exp(-x cosh t) cosh(n t) dt, cut where the integrand underflows."""
    tmax = math.acosh(max(800.0 / x, 1.0)) + 5.0

    def f(t):
        e = -x * math.cosh(t)
        return 0.5 * (math.exp(e + n * t) + math.exp(e - n * t))

    val, _ = integrate.quad(f, 0.0, tmax, epsabs=0.0, epsrel=1e-13, limit=400)
    return val


def jn_series(n, x, terms=80):
    """J_n(x) by its power series with exact-ish float accumulation (small x)."""
    acc = 0.0
    for k in range(terms):
        acc += (-1) ** k * (x / 2.0) ** (2 * k + n) / (math.factorial(k) * math.factorial(k + n))
    return acc


def jn_integral(n, x):
    """J_n(x) = (1/pi) int_0^pi cos(n t - x sin t) dt by adaptive quadrature."""
    with warnings.catch_warnings():
        # oscillatory integrand: quad reports roundoff at the 1e-14 level
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, _ = integrate.quad(lambda t: math.cos(n * t - x * math.sin(t)), 0.0, math.pi,
                                epsabs=1e-14, epsrel=1e-13, limit=500)
    return val / math.pi


def bisect(f, a, b, tol=1e-14):
    fa = f(a)
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = f(m)
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m
        if b - a < tol:
            break
    return 0.5 * (a + b)


def zeta3_series():
    """zeta(3) from the direct sum up to N plus the integral tail bound 1/(2N^2)."""
    n = 200000
    k = np.arange(1, n + 1, dtype=float)
    partial = math.fsum((1.0 / k ** 3).tolist())
    # tail sum_{k>N} k^-3 lies between 1/(2(N+1)^2) and 1/(2N^2)
    lo, hi = 0.5 / (n + 1) ** 2, 0.5 / n ** 2
    return partial + 0.5 * (lo + hi), 0.5 * (hi - lo)


def polylog_series(s, z, terms=4000):
    k = np.arange(1, terms + 1, dtype=float)
    return math.fsum((z ** k / k ** s).tolist())


def classical_plates_quadrature(A, L, T):
    """-T int_0^inf (lambda A/pi) lambda / (exp(2 L lambda) - 1) d lambda."""
    val, _ = integrate.quad(lambda l: l * l / math.expm1(2.0 * L * l) if 0 < 2 * L * l < 700 else 0.0,
                            0.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=200)
    return -T * A / math.pi * val


def single_mode_t0_quadrature(lam, L):
    """T = 0 force of one mode, -(1/pi) int_0^inf s/(exp(2 L s) - 1) d omega."""
    def f(w):
        s = math.hypot(w, lam)
        return s / math.expm1(2.0 * L * s) if 2.0 * L * s < 700.0 else 0.0

    val, _ = integrate.quad(f, 0.0, np.inf, epsabs=0.0, epsrel=1e-12, limit=200)
    return -val / math.pi


def rectangle_levels(w, h, nmax=60):
    """Brute-force Dirichlet and Neumann lambda^2 lists of a rectangle."""
    dirichlet, neumann = [], []
    for n in range(nmax):
        for m in range(nmax):
            l2 = math.pi ** 2 * (n * n / w ** 2 + m * m / h ** 2)
            if n >= 1 and m >= 1:
                dirichlet.append(l2)
            if n + m > 0:
                neumann.append(l2)
    return sorted(dirichlet), sorted(neumann)
