"""Near- and far-field approximations to the piston force.

Near field (``L`` small against the cross section) the mode sum can be
replaced by an integral over the density of states; Dirichlet and Neumann
perimeter terms cancel, leaving the area and the curvature parameter chi.
Far field only the lowest eigenvalue matters.

:func:`dos_oracle` evaluates the continuum integral by adaptive quadrature
and is the independent reference for the closed forms.
"""
import math

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError, TruncationError
from .specfun import ZETA3, polylog

__all__ = [
    "near_T0", "near_classical", "near_classical_printed", "near_finite_T",
    "far_force", "dos_oracle", "default_m_max",
]


def _positive(**kw):
    for name, v in kw.items():
        if not (math.isfinite(v) and v > 0):
            raise DomainError(f"{name} must be positive, got {v}")


def near_T0(A, chi, L):
    """Zero-temperature near-field force ``-A pi^2/(240 L^4) - (2 chi - 1) pi/(24 L^2)``.

    The curvature term is repulsive for chi < 1/2 (every convex polygon and
    the circle) and vanishes for chi = 1/2.
    """
    _positive(A=A, L=L)
    return -A * math.pi ** 2 / (240.0 * L ** 4) - (2.0 * chi - 1.0) * math.pi / (24.0 * L ** 2)


def near_classical(A, L, T):
    """Classical near-field force ``-T A zeta(3) / (4 pi L^3)``.

    The prefactor follows from integrating the area density of states
    ``lambda A / pi`` against ``lambda / (exp(2 L lambda) - 1)``.
    """
    _positive(A=A, L=L, T=T)
    return -T * A * ZETA3 / (4.0 * math.pi * L ** 3)


def near_classical_printed(A, L, T):
    """The same law with prefactor ``1/4`` in place of ``1/(4 pi)``.

    Kept for comparison only; it is larger than the density-of-states
    integral by a factor pi.
    """
    _positive(A=A, L=L, T=T)
    return -T * A * ZETA3 / (4.0 * L ** 3)


def default_m_max(L, T):
    """Smallest m with ``2 L m Lambda > 40``."""
    _positive(L=L, T=T)
    return int(math.floor(40.0 / (2.0 * L * 2.0 * math.pi * T))) + 1


def near_finite_T(A, chi, L, T, m_max=None, include_static=False):
    """Finite-temperature near-field force from the polylog series.

    ``F = -T A/(4 pi L^3) sum_{m in Z} [Li3(q) + x Li2(q) + x^2/2 Li1(q)]
    - 2 T (2 chi - 1) sum_{m>=1} m Lambda / (exp(2 L m Lambda) - 1)``

    with ``x = 2 L |m| Lambda`` and ``q = exp(-x)``; the ``m = 0`` area term
    is ``zeta(3)``. It tends to :func:`near_T0` as ``T -> 0`` and to
    :func:`near_classical` as ``T -> inf``.

    Parameters
    ----------
    A, chi, L, T : float
    m_max : int, optional
        Last Matsubara index kept (default :func:`default_m_max`).
    include_static : bool
        Add the static curvature term ``-T (2 chi - 1)/(2 L)``, which the
        continuum integral produces but which is subleading in the near
        field. Off by default.

    Raises
    ------
    TruncationError
        The last kept term exceeds 1e-12 of the total.
    """
    _positive(A=A, L=L, T=T)
    Lam = 2.0 * math.pi * T
    if m_max is None:
        m_max = default_m_max(L, T)
    if m_max < 1:
        raise DomainError("m_max must be >= 1")
    m = np.arange(1, int(m_max) + 1, dtype=float)
    x = 2.0 * L * m * Lam
    q = np.exp(-x)
    # Li_s(q) with q -> 0 is exactly q to double precision once q < 1e-300
    area_terms = polylog(3, q) + x * polylog(2, q) + 0.5 * x * x * polylog(1, q)
    with np.errstate(over="ignore"):
        curv_terms = m * Lam / np.expm1(x)
    area = -T * A / (4.0 * math.pi * L ** 3) * (ZETA3 + 2.0 * math.fsum(area_terms))
    curv = -2.0 * T * (2.0 * chi - 1.0) * math.fsum(curv_terms)
    if include_static:
        curv -= T * (2.0 * chi - 1.0) / (2.0 * L)
    total = area + curv
    last = abs(2.0 * T * A / (4.0 * math.pi * L ** 3) * area_terms[-1]) \
        + abs(2.0 * T * (2.0 * chi - 1.0) * curv_terms[-1])
    if last > 1e-12 * abs(total):
        raise TruncationError(
            f"m_max = {m_max} leaves a last term of {last:.3g} (> 1e-12 of {total:.6g}); "
            f"use m_max >= {default_m_max(L, T)}")
    return total


def far_force(lambda1, g1, L, T=0.0, regime="quantum"):
    """Lowest-mode far-field force.

    quantum: ``-g1 lambda1^{3/2} exp(-2 L lambda1) / (2 sqrt(pi L))``;
    classical: ``-T g1 lambda1 exp(-2 L lambda1)``.
    """
    _positive(lambda1=lambda1, L=L)
    if g1 < 1:
        raise DomainError("degeneracy g1 must be >= 1")
    if regime == "quantum":
        return -g1 * lambda1 ** 1.5 * math.exp(-2.0 * L * lambda1) / (2.0 * math.sqrt(math.pi * L))
    if regime == "classical":
        _positive(T=T)
        return -T * g1 * lambda1 * math.exp(-2.0 * L * lambda1)
    raise DomainError(f"regime must be 'quantum' or 'classical', got {regime!r}")


_MAX_MATSUBARA = 200000


def dos_oracle(A, L, T, chi=None, rtol=1e-8):
    """Continuum (density-of-states) force by adaptive quadrature.

    ``-T sum_{m in Z} int_0^inf (lambda A / pi) s / (exp(2 L s) - 1) d lambda``
    with ``s = sqrt(m^2 Lambda^2 + lambda^2)``. At ``T = 0`` the Matsubara
    sum becomes ``(1/2 pi) int d omega`` and a double integral is done.
    When ``chi`` is given, the boundary delta-function weight
    ``(2 chi - 1)`` at ``lambda = 0`` (corner/curvature term minus the
    excluded zero mode) is added; the perimeter terms cancel between the
    two boundary conditions and never appear.

    Raises
    ------
    ConvergenceError
        Quadrature error estimate above tolerance.
    """
    _positive(A=A, L=L)
    if not (math.isfinite(T) and T >= 0):
        raise DomainError("T must be >= 0")
    if T == 0:
        return _dos_T0(A, L, chi, rtol)
    Lam = 2.0 * math.pi * T
    m_max = int(math.ceil(60.0 / (2.0 * L * Lam)))
    if m_max > _MAX_MATSUBARA:
        raise DomainError(f"T = {T} needs {m_max} Matsubara terms at L = {L}; use T = 0")
    w = np.arange(0, m_max + 1, dtype=float) * Lam
    weights = np.full(w.size, 2.0)
    weights[0] = 1.0

    def integrand(lam):
        s = np.sqrt(w * w + lam * lam)
        with np.errstate(over="ignore"):
            return lam * s / np.expm1(2.0 * L * s)

    vals, err = integrate.quad_vec(integrand, 0.0, np.inf, epsrel=rtol, epsabs=0.0)
    per_m = A / math.pi * vals
    total = -T * math.fsum(weights * per_m)
    if err > max(100.0 * rtol, 1e-10) * np.max(np.abs(per_m)) * w.size:
        raise ConvergenceError("density-of-states quadrature did not converge")
    if chi is not None:
        with np.errstate(over="ignore"):
            g = w[1:] / np.expm1(2.0 * L * w[1:])
        total -= T * (2.0 * chi - 1.0) * (1.0 / (2.0 * L) + 2.0 * math.fsum(g))
    return total


def _dos_T0(A, L, chi, rtol):
    def inner(omega):
        def f(lam):
            s = math.hypot(omega, lam)
            return lam * s / math.expm1(2.0 * L * s) if 2.0 * L * s < 700.0 else 0.0
        val, _ = integrate.quad(f, 0.0, np.inf, epsrel=rtol, epsabs=0.0, limit=200)
        return val

    # (1/2 pi) int_{-inf}^{inf} d omega = (1/pi) int_0^inf d omega
    outer, err = integrate.quad(inner, 0.0, np.inf, epsrel=rtol, epsabs=0.0, limit=200)
    if err > max(100.0 * rtol, 1e-10) * abs(outer):
        raise ConvergenceError("density-of-states quadrature did not converge")
    total = -A / math.pi ** 2 * outer
    if chi is not None:
        def g(w):
            if w == 0.0:
                return 1.0 / (2.0 * L)
            return w / math.expm1(2.0 * L * w) if 2.0 * L * w < 700.0 else 0.0
        curv, _ = integrate.quad(g, 0.0, np.inf, epsrel=rtol, epsabs=0.0)
        total -= (2.0 * chi - 1.0) / math.pi * curv
    return total
