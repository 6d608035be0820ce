"""Regularized electromagnetic Casimir force on the piston plates.

Natural units ``hbar = c = k_B = 1``: temperatures are ``k_B T / hbar c``
(inverse length) and forces come out in units of ``hbar c / length^2``.
Negative values mean attraction.

Three independent evaluations of the same regularized force are offered:

* :func:`force_finite_T` sums over Matsubara frequencies
  ``F = -T sum_p sum_m s/(exp(2 L s) - 1)``, ``s = sqrt(m^2 Lambda^2 + lambda_p^2)``;
* :func:`force_T0` is the zero-temperature Bessel series
  ``F = -1/(2 pi) sum_p sum_n lambda_p^2 [K0 + K2](2 n L lambda_p)``;
* :func:`force_classical` keeps the static term only,
  ``F = -T sum_p lambda_p / (exp(2 L lambda_p) - 1)``.

:func:`kernel_force` demonstrates the cutoff-kernel regularization with an
auxiliary far plate.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Union

import numpy as np
from scipy.integrate import cumulative_trapezoid

from . import _backend
from .errors import CutoffCoverageError, DomainError, InsufficientSpectrumError

__all__ = [
    "ThermalState", "ForceResult", "KernelSpec", "KernelForce", "matsubara_weight",
    "force_T0", "force_classical", "force_finite_T", "kernel_force", "kernel_scan",
]

TWO_PI = 2.0 * math.pi
K_UNDERFLOW = 700.0
# e-folds of exp(-2 L lambda) covered by the Weyl tail quadrature
_TAIL_EFOLDS = 60.0
_TAIL_SAFETY = 2.0


@dataclass(frozen=True)
class ThermalState:
    """Plate separation ``L`` and temperature ``T`` (as ``k_B T / hbar c``)."""

    L: float
    T: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.L) and self.L > 0):
            raise DomainError(f"separation L must be positive, got {self.L}")
        if not (math.isfinite(self.T) and self.T >= 0):
            raise DomainError(f"temperature T must be >= 0, got {self.T}")

    @property
    def Lambda(self):
        """Inverse thermal wavelength ``2 pi T``."""
        return TWO_PI * self.T


@dataclass(frozen=True)
class ForceResult:
    value: float
    regime: str
    modes_used: int
    matsubara_terms: int
    truncation_estimate: float
    L: Optional[float] = None
    T: Optional[float] = None
    details: dict = field(default_factory=dict, compare=False, repr=False)

    def to_record(self):
        """JSON-ready dict with the documented field names."""
        return {
            "value": self.value,
            "regime": self.regime,
            "modes_used": self.modes_used,
            "matsubara_terms": self.matsubara_terms,
            "truncation_estimate": self.truncation_estimate,
            "L": self.L,
            "T": self.T,
        }


_BUILTIN_KERNELS = {
    "exp": (_backend.python_kernels.KERNEL_EXP, -math.log(1e-18)),
    "gauss": (_backend.python_kernels.KERNEL_GAUSS, math.sqrt(-math.log(1e-18))),
}


@dataclass(frozen=True)
class KernelSpec:
    """Regularizing kernel K with K(0) = 1, K(inf) = 0, cutoff Q and far plate.

    ``kernel`` is ``"exp"`` (``exp(-x)``), ``"gauss"`` (``exp(-x^2)``) or a
    vectorized callable.
    """

    kernel: Union[str, Callable] = "exp"
    Q: float = 1.0
    L_inf: float = 100.0

    def __post_init__(self):
        if isinstance(self.kernel, str) and self.kernel not in _BUILTIN_KERNELS:
            raise DomainError(f"unknown kernel {self.kernel!r}; have {sorted(_BUILTIN_KERNELS)}")
        if not callable(self.kernel) and not isinstance(self.kernel, str):
            raise DomainError("kernel must be a name or a callable")
        if not self.Q > 0:
            raise DomainError("cutoff Q must be positive")
        if not self.L_inf > 0:
            raise DomainError("L_inf must be positive")

    def __call__(self, x):
        if isinstance(self.kernel, str):
            return _backend.python_kernels._kernel_values(_BUILTIN_KERNELS[self.kernel][0],
                                                          np.asarray(x, dtype=float))
        return np.asarray(self.kernel(np.asarray(x, dtype=float)), dtype=float)

    def support(self):
        """Argument beyond which |K| < 1e-18."""
        if isinstance(self.kernel, str):
            return _BUILTIN_KERNELS[self.kernel][1]
        x = 1.0
        while x < 1e8:
            if abs(float(self(np.array([x]))[0])) < 1e-18 and \
                    abs(float(self(np.array([2.0 * x]))[0])) < 1e-18:
                return x
            x *= 2.0
        raise DomainError("kernel does not decay below 1e-18 before x = 1e8")


class KernelForce(NamedTuple):
    net: float
    side_L: float
    side_Linf: float
    Q: float
    modes_used: int
    nx_terms: int


def matsubara_weight(lam, T):
    """Bracket ``1 + 2/(exp(lambda/T) - 1)`` of the Matsubara-summed mode weight.

    Equals 1 at ``T = 0``.
    """
    lam = np.asarray(lam, dtype=float)
    if T == 0:
        out = np.ones_like(lam)
    else:
        with np.errstate(over="ignore"):
            out = 1.0 + 2.0 / np.expm1(lam / T)
    return float(out) if out.ndim == 0 else out


# -- shared machinery --------------------------------------------------------

def _validate(ms, L, tol):
    if not len(ms):
        raise DomainError("spectrum is empty")
    if not (math.isfinite(L) and L > 0):
        raise DomainError(f"separation L must be positive, got {L}")
    if not 0 < tol < 1:
        raise DomainError(f"tol must lie in (0, 1), got {tol}")


def _inner_rtol(tol):
    return max(1e-4 * tol, 1e-15)


def _run_partitioned(func, lam, counts, partitions=1, workers=1):
    """Evaluate a per-mode kernel on contiguous chunks and reassemble."""
    parts = max(int(partitions), int(workers), 1)
    if parts == 1:
        return func(lam, counts)
    bounds = np.linspace(0, lam.size, parts + 1).round().astype(int)
    jobs = [(lam[a:b], counts[a:b]) for a, b in zip(bounds[:-1], bounds[1:])]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=int(workers)) as pool:
            results = list(pool.map(lambda job: func(*job), jobs))
    else:
        results = [func(*job) for job in jobs]
    return np.concatenate(results)


def _area_estimate(ms):
    """Area implied by the combined Weyl law at the top of the spectrum."""
    return TWO_PI * ms.cutoff_count / ms.lam[-1] ** 2


def _tail(ms, L, per_mode, area, budget, complete=False):
    """Weyl-extrapolated contribution of the modes beyond the spectrum.

    Integrates ``(A lambda / pi) f(lambda)`` from the last eigenvalue on,
    with a safety factor. Also returns the estimated mode count at which
    the remaining tail would drop below ``budget``.
    """
    if complete:
        return 0.0, None
    lam0 = float(ms.lam[-1])
    area = _area_estimate(ms) if area is None else area
    grid = np.linspace(lam0, lam0 + _TAIL_EFOLDS / (2.0 * L), 601)
    integrand = area * grid / math.pi * per_mode(grid)
    from_right = cumulative_trapezoid(integrand[::-1], grid[::-1], initial=0.0)[::-1]
    remaining = -_TAIL_SAFETY * from_right
    estimate = float(remaining[0])
    required = None
    if estimate > budget:
        ok = np.flatnonzero(remaining <= budget)
        lam_star = grid[ok[0]] if ok.size else grid[-1]
        required = int(math.ceil(ms.cutoff_count + area * (lam_star ** 2 - lam0 ** 2) / TWO_PI))
    return estimate, required


def _finish(value, regime, ms, L, T, inner_tail, spectral_tail, required, tol, strict,
            matsubara_terms, details):
    estimate = float(inner_tail + spectral_tail)
    if strict and estimate > tol * abs(value):
        raise InsufficientSpectrumError(
            f"{ms.cutoff_count} modes leave a truncation error of about {estimate:.3g} "
            f"(> tol * |F| = {tol * abs(value):.3g}) at L = {L}; "
            f"about {required} modes are needed",
            required_count=required)
    details = dict(details, spectral_tail=float(spectral_tail), inner_tail=float(inner_tail),
                   required_count=required)
    return ForceResult(float(value), regime, ms.cutoff_count, int(matsubara_terms), estimate,
                       L=L, T=T, details=details)


def _fsum_weighted(mult, values):
    return math.fsum((mult * values).tolist())


# -- T = 0 -------------------------------------------------------------------

def _bessel_terms(lam, L, rtol):
    """Number of n-terms per mode; geometric envelope exp(-2 L lambda)."""
    x = 2.0 * L * lam
    with np.errstate(divide="ignore"):
        n = np.ceil((-math.log(rtol) - np.log(-np.expm1(-x))) / x)
    n = np.clip(n, 1, np.floor(K_UNDERFLOW / x) + 1)
    n[x > K_UNDERFLOW] = 0
    return n.astype(np.int64)


def _bessel_tail(kern, lam, L, nterms):
    """Bound on the neglected n-terms: term_N * r / (1 - r), r = exp(-2 L lambda)."""
    x = 2.0 * L * lam
    z = np.maximum(nterms, 1) * x
    k0, k1 = kern.bessel_k0k1(z)
    term = lam * lam * (2.0 * k0 + 2.0 * k1 / z)
    ratio = np.exp(-x) / -np.expm1(-x)
    out = term * ratio
    out[nterms == 0] = 0.0
    return out


def _t0_per_mode(kern, L, rtol):
    def per_mode(lam):
        n = _bessel_terms(lam, L, rtol)
        return kern.t0_mode_sums(lam, L, n) / TWO_PI
    return per_mode


def force_T0(ms, L, tol=1e-6, *, strict=True, area=None, complete=False, partitions=1,
             workers=1, backend=None):
    """Zero-temperature force from the modified-Bessel series.

    Parameters
    ----------
    ms : ModeSpectrum
    L : float
        Plate separation.
    tol : float
        Relative accuracy target; the inner n-series are summed to
        ``1e-4 * tol`` and the Weyl-extrapolated contribution of missing
        modes must stay below ``tol * |F|``.
    strict : bool
        Raise :class:`InsufficientSpectrumError` when the spectrum is too
        short for ``tol``; otherwise just report the estimate.
    area : float, optional
        Cross-section area for the tail estimate (default: inferred from
        the spectrum via Weyl's law).
    complete : bool
        The spectrum is the whole model (e.g. a single mode), not the
        start of a Laplacian spectrum: skip the Weyl extrapolation.
    partitions, workers : int
        Split the mode sum into contiguous chunks, optionally on threads.
        The result does not depend on either.
    backend : {"compiled", "python"}, optional

    Returns
    -------
    ForceResult
    """
    _validate(ms, L, tol)
    kern = _backend.get(backend)
    rtol = _inner_rtol(tol)
    lam = ms.lam
    n = _bessel_terms(lam, L, rtol)
    sums = _run_partitioned(lambda l, c: kern.t0_mode_sums(l, L, c), lam, n,
                            partitions, workers)
    value = -_fsum_weighted(ms.mult, sums) / TWO_PI
    inner = _fsum_weighted(ms.mult, _bessel_tail(kern, lam, L, n)) / TWO_PI
    spectral, required = _tail(ms, L, _t0_per_mode(kern, L, rtol), area,
                               tol * abs(value), complete)
    return _finish(value, "quantum", ms, L, 0.0, inner, spectral, required, tol, strict, 0,
                   {"bessel_terms": int(n.max())})


# -- hbar = 0 ----------------------------------------------------------------

def _classical_per_mode(L, T):
    def per_mode(lam):
        with np.errstate(over="ignore"):
            return T * lam / np.expm1(2.0 * L * lam)
    return per_mode


def force_classical(ms, L, T, tol=1e-6, *, strict=True, area=None, complete=False,
                    partitions=1, workers=1, backend=None):
    """Classical (static Matsubara term only) force ``-T sum_p lambda_p/(e^{2 L lambda_p}-1)``.

    Keyword arguments as in :func:`force_T0`.
    """
    _validate(ms, L, tol)
    if not (math.isfinite(T) and T > 0):
        raise DomainError("classical force needs T > 0")
    per_mode = _classical_per_mode(L, T)
    vals = _run_partitioned(lambda l, c: per_mode(l), ms.lam, ms.mult, partitions, workers)
    value = -_fsum_weighted(ms.mult, vals)
    spectral, required = _tail(ms, L, per_mode, area, tol * abs(value), complete)
    return _finish(value, "classical", ms, L, T, 0.0, spectral, required, tol, strict, 1, {})


# -- finite T ----------------------------------------------------------------

def _matsubara_tail_bound(lam, L, Lam, M):
    """Upper bound on ``sum_{m > M} s/(exp(2 L s) - 1)``.

    Minimum of two bounds: one from the convexity of ``s(m)`` (tight when
    many Matsubara terms are needed), one from ``2 s >= lambda + m Lambda``
    (tight when the first term already dominates).
    """
    m0 = M + 1.0
    s0 = np.sqrt((m0 * Lam) ** 2 + lam * lam)
    log_c = -np.log(-np.expm1(-2.0 * L * s0))
    slope = m0 * Lam * Lam / s0
    omq = -np.expm1(-2.0 * L * slope)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_b1 = (log_c - 2.0 * L * s0 - 2.0 * np.log(omq)
                  + np.log(s0 * omq + Lam * (1.0 - omq)))
        omq2 = -math.expm1(-L * Lam)
        a0 = lam + m0 * Lam
        log_b2 = (log_c - L * a0 - 2.0 * math.log(omq2)
                  + np.log(a0 * omq2 + Lam * (1.0 - omq2)))
    log_b = np.fmin(np.where(np.isnan(log_b1), np.inf, log_b1), log_b2)
    with np.errstate(under="ignore"):
        return np.exp(log_b)


def _matsubara_terms(lam, weight, L, Lam, threshold):
    """Smallest M per mode with ``2 * weight * bound(M) <= threshold``."""
    m_hi = int(math.ceil(800.0 / (2.0 * L * Lam))) + 1
    M = np.zeros(lam.size, dtype=np.int64)
    bad = 2.0 * weight * _matsubara_tail_bound(lam, L, Lam, M) > threshold
    lo = np.zeros(lam.size, dtype=np.int64)
    hi = np.full(lam.size, m_hi, dtype=np.int64)
    while np.any(bad & (hi - lo > 1)):
        mid = (lo + hi) // 2
        good = 2.0 * weight * _matsubara_tail_bound(lam, L, Lam, mid) <= threshold
        hi = np.where(bad & good, mid, hi)
        lo = np.where(bad & ~good, mid, lo)
    M[bad] = hi[bad]
    return M


def _finite_t_per_mode(kern, L, T, threshold):
    Lam = TWO_PI * T

    def per_mode(lam):
        M = _matsubara_terms(lam, 1.0, L, Lam, threshold)
        return T * kern.finite_t_mode_sums(lam, L, Lam, M)
    return per_mode


def force_finite_T(ms, st, tol=1e-6, *, strict=True, area=None, complete=False,
                   partitions=1, workers=1, backend=None):
    """Finite-temperature force from the Matsubara double sum.

    The m-sum is folded as ``term(0) + 2 sum_{m>=1}``. Each mode's series is
    cut where a rigorous tail bound falls below ``1e-4 * tol`` times the
    lowest mode's contribution divided by the number of entries, so the
    per-mode cut does not depend on how the spectrum is partitioned.

    Keyword arguments as in :func:`force_T0`.
    """
    if not isinstance(st, ThermalState):
        raise TypeError("st must be a ThermalState")
    L, T = st.L, st.T
    _validate(ms, L, tol)
    if T <= 0:
        raise DomainError("finite-temperature force needs T > 0; use force_T0")
    kern = _backend.get(backend)
    rtol = _inner_rtol(tol)
    lam = ms.lam
    Lam = st.Lambda
    with np.errstate(over="ignore"):
        g0 = lam / np.expm1(2.0 * L * lam)
    # the lowest mode sets the absolute scale for every other cut
    M0 = _matsubara_terms(lam[:1], 1.0, L, Lam, rtol * g0[0])
    lead = float(ms.mult[0] * kern.finite_t_mode_sums(lam[:1], L, Lam, M0)[0])
    threshold = rtol * lead / len(ms)
    M = _matsubara_terms(lam, ms.mult.astype(float), L, Lam, threshold)
    sums = _run_partitioned(lambda l, c: kern.finite_t_mode_sums(l, L, Lam, c), lam, M,
                            partitions, workers)
    value = -T * _fsum_weighted(ms.mult, sums)
    inner = T * _fsum_weighted(ms.mult, 2.0 * _matsubara_tail_bound(lam, L, Lam, M))
    spectral, required = _tail(ms, L, _finite_t_per_mode(kern, L, T, threshold), area,
                               tol * abs(value), complete)
    return _finish(value, "finiteT", ms, L, T, inner, spectral, required, tol, strict,
                   int(M.max()) + 1, {})


# -- kernel regularization ---------------------------------------------------

def _side_terms(lam, L, Q, xcut):
    """Longitudinal terms needed per mode until the kernel argument exceeds xcut."""
    room = np.maximum(Q * xcut - lam * lam, 0.0)
    return np.floor(L * np.sqrt(room) / math.pi).astype(np.int64)


def kernel_force(ms, L, ks=None, nx_max=None, T=0.0, *, partitions=1, workers=1,
                 backend=None):
    """Cutoff-kernel regularized force with an auxiliary plate at ``ks.L_inf``.

    Each side sums
    ``pi^2 sum_{n_x>=1} sum_p n_x^2 K[(k^2 + lambda_p^2)/Q] / (L^3 sqrt(k^2 + lambda_p^2))``
    with ``k = n_x pi / L``. The returned net force is half the difference
    ``side(L) - side(L_inf)``: the factor 1/2 is the zero-point weight of
    each mode, and with it the net force tends to :func:`force_T0` as
    ``Q`` grows. Both one-sided sums diverge with ``Q``.

    Parameters
    ----------
    ms : ModeSpectrum
    L : float
    ks : KernelSpec
    nx_max : int, optional
        Hard cap on the longitudinal index; :class:`CutoffCoverageError`
        if the kernel support needs more terms.
    T : float
        Must be 0; the kernel construction is only provided at zero
        temperature.

    Returns
    -------
    KernelForce
    """
    ks = KernelSpec() if ks is None else ks
    _validate(ms, L, 1e-6)
    if T != 0:
        raise DomainError("kernel regularization is only implemented at T = 0")
    if ks.L_inf < 10.0 * L:
        raise DomainError(f"L_inf = {ks.L_inf} must be at least 10 L = {10.0 * L}")
    xcut = ks.support()
    lam = ms.lam
    n_L = _side_terms(lam, L, ks.Q, xcut)
    n_inf = _side_terms(lam, ks.L_inf, ks.Q, xcut)
    needed = int(max(n_L.max(), n_inf.max()))
    if nx_max is not None and needed > nx_max:
        raise CutoffCoverageError(
            f"kernel support at Q = {ks.Q} needs n_x up to {needed} > nx_max = {nx_max}")
    if isinstance(ks.kernel, str):
        kern = _backend.get(backend)
        kind = _BUILTIN_KERNELS[ks.kernel][0]
    else:
        kern = _backend.python_kernels
        kind = ks.kernel
    side_L = _run_partitioned(lambda l, c: kern.kernel_side_sums(l, L, ks.Q, c, kind),
                              lam, n_L, partitions, workers)
    side_inf = _run_partitioned(lambda l, c: kern.kernel_side_sums(l, ks.L_inf, ks.Q, c, kind),
                                lam, n_inf, partitions, workers)
    net = 0.5 * _fsum_weighted(ms.mult, side_L - side_inf)
    return KernelForce(net, _fsum_weighted(ms.mult, side_L), _fsum_weighted(ms.mult, side_inf),
                       float(ks.Q), ms.cutoff_count, needed)


def kernel_scan(ms, L, Q_values, kernel="exp", L_inf=100.0, nx_max=None, **kwargs):
    """:func:`kernel_force` over a list of cutoffs."""
    return [kernel_force(ms, L, KernelSpec(kernel, float(Q), L_inf), nx_max, **kwargs)
            for Q in Q_values]
