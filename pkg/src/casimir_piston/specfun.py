"""Special functions used by the force sums and their asymptotics.

Everything here is implemented in-repo: polylogarithms of integer order
1-3 on [0, 1], the modified Bessel functions K0, K1, K2, Bessel functions
J_n of integer order and the positive zeros of J_n and J_n'.
"""
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import _backend
from .errors import ConvergenceError, DivergenceError, DomainError

ZETA2 = math.pi ** 2 / 6.0
ZETA3 = 1.2020569031595942853997381615114
ZETA4 = math.pi ** 4 / 90.0

K_UNDERFLOW = 700.0


class ZeroKind(str, enum.Enum):
    J = "zero-of-J"
    JP = "zero-of-J-derivative"


# -- polylogarithm ---------------------------------------------------------

@lru_cache(maxsize=None)
def _bernoulli(n):
    """Bernoulli numbers B_0..B_n as Fractions (B_1 = -1/2)."""
    b = [Fraction(1)]
    for m in range(1, n + 1):
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * b[k]
        b.append(-acc / (m + 1))
    return tuple(b)


def _zeta_nonpositive(n):
    """zeta(-n) for integer n >= 0."""
    if n == 0:
        return -0.5
    return float(-_bernoulli(n + 1)[n + 1] / (n + 1))


_ZETA_POS = {1: None, 2: ZETA2, 3: ZETA3}
_LOG_SERIES_TERMS = 30


def _polylog_log_series(s, mu):
    """Li_s(exp(mu)) for mu in [-ln 2, 0] via the expansion in mu."""
    out = np.zeros_like(mu)
    harmonic = sum(1.0 / j for j in range(1, s))
    with np.errstate(divide="ignore", invalid="ignore"):
        sing = mu ** (s - 1) / math.factorial(s - 1) * (harmonic - np.log(-mu))
    out += np.where(mu == 0.0, 0.0, sing)
    for k in range(0, s + _LOG_SERIES_TERMS):
        if k == s - 1:
            continue
        order = s - k
        zeta = _ZETA_POS[order] if order > 0 else _zeta_nonpositive(-order)
        out += zeta * mu ** k / math.factorial(k)
    return out


def polylog(s, z):
    """Polylogarithm ``Li_s(z)`` for ``s`` in {1, 2, 3} and real ``z`` in [0, 1].

    Parameters
    ----------
    s : int
        Order, one of 1, 2, 3.
    z : float or array_like
        Argument in the closed interval [0, 1].

    Returns
    -------
    float or ndarray
        ``sum_{k>=1} z**k / k**s``. Direct power series for ``z <= 1/2``;
        above that the expansion in ``ln z`` around ``z = 1``, which
        converges like ``(ln z / 2 pi)**k``.

    Raises
    ------
    DomainError
        ``s`` not in {1, 2, 3} or ``z`` outside [0, 1].
    DivergenceError
        ``s = 1`` at ``z = 1``.
    """
    if s not in (1, 2, 3):
        raise DomainError(f"polylog order must be 1, 2 or 3, got {s}")
    scalar = np.ndim(z) == 0
    z = np.atleast_1d(np.asarray(z, dtype=float))
    if np.any(~np.isfinite(z)) or np.any(z < 0.0) or np.any(z > 1.0):
        raise DomainError("polylog argument must lie in [0, 1]")
    if s == 1:
        if np.any(z == 1.0):
            raise DivergenceError("Li_1(1) diverges")
        out = -np.log1p(-z)
    else:
        out = np.empty_like(z)
        low = z <= 0.5
        zl = z[low]
        acc = np.zeros_like(zl)
        power = np.ones_like(zl)
        for k in range(1, 64):
            power = power * zl
            acc += power / k ** s
        out[low] = acc
        out[~low] = _polylog_log_series(s, np.log(z[~low]))
    return float(out[0]) if scalar else out


# -- modified Bessel K -------------------------------------------------------

def bessel_k(order, x):
    """Modified Bessel function of the second kind ``K_order(x)``.

    ``order`` is 0, 1 or 2; ``K_2(x) = K_0(x) + 2 K_1(x) / x``. Arguments
    above 700 underflow to exactly 0.
    """
    if order not in (0, 1, 2):
        raise DomainError(f"bessel_k order must be 0, 1 or 2, got {order}")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~(x > 0.0)):
        raise DomainError("bessel_k requires x > 0")
    k0, k1 = _backend.kernels.bessel_k0k1(x)
    if order == 0:
        out = k0
    elif order == 1:
        out = k1
    else:
        out = k0 + 2.0 * k1 / x
    return float(out[0]) if scalar else out


# -- Bessel J ----------------------------------------------------------------

_SERIES_MAX_X = 4.0


def _jn_series(n, x):
    half = 0.5 * x
    y = -half * half
    with np.errstate(divide="ignore", invalid="ignore"):
        logpre = n * np.log(half) - math.lgamma(n + 1)
    pre = np.where(x == 0.0, 1.0 if n == 0 else 0.0, np.exp(logpre))
    term = np.ones_like(x)
    acc = np.ones_like(x)
    for k in range(1, 40):
        term = term * y / (k * (k + n))
        acc += term
    return pre * acc


def _jn_trapezoid(orders, x):
    """Bessel's integral by the periodic trapezoid rule.

    The M-point rule equals ``sum_k J_{n+kM}(x)``, so M just past the
    turning region ``n + x`` makes the aliasing error negligible.
    Returns an array of shape ``(len(orders), len(x))``.
    """
    orders = np.asarray(orders, dtype=float)
    big = float(np.max(x)) + float(np.max(orders))
    m = int(big + 16.0 * (0.5 * big + 1.0) ** (1.0 / 3.0) + 32)
    tau = 2.0 * math.pi * np.arange(m) / m
    sin_tau = np.sin(tau)
    out = np.empty((orders.size, x.size))
    for i, n in enumerate(orders):
        phase = n * tau[None, :] - x[:, None] * sin_tau[None, :]
        out[i] = np.cos(phase).mean(axis=1)
    return out


def _jn(n, x):
    """J_n on a 1D array of nonnegative x, integer n >= 0."""
    out = np.empty_like(x)
    small = x <= _SERIES_MAX_X
    if np.any(small):
        out[small] = _jn_series(n, x[small])
    if np.any(~small):
        out[~small] = _jn_trapezoid([n], x[~small])[0]
    return out


def bessel_j(nu, x):
    """Bessel function of the first kind ``J_nu(x)`` for integer ``nu >= 0``.

    Absolute accuracy is about 1e-13 for ``x <= 1000`` and ``nu <= 200``.
    """
    nu = int(nu)
    if nu < 0:
        raise DomainError("bessel_j order must be nonnegative")
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    sign = np.where(x < 0.0, (-1.0) ** nu, 1.0)
    out = sign * _jn(nu, np.abs(x))
    return float(out[0]) if scalar else out


def bessel_jp(nu, x):
    """Derivative ``J_nu'(x)``."""
    nu = int(nu)
    if nu == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(nu - 1, x) - bessel_j(nu + 1, x))


# -- zeros -------------------------------------------------------------------

@dataclass(frozen=True)
class BesselZeroTable:
    """First positive zeros of ``J_nu`` or ``J_nu'`` in increasing order."""

    nu: int
    kind: ZeroKind
    zeros: np.ndarray

    def __len__(self):
        return len(self.zeros)

    def __getitem__(self, i):
        return self.zeros[i]


def mcmahon(nu, kind, k):
    """McMahon's large-k estimate of the k-th positive zero."""
    kind = ZeroKind(kind)
    mu = 4.0 * nu * nu
    if kind is ZeroKind.J:
        beta = (k + 0.5 * nu - 0.25) * math.pi
        return (beta - (mu - 1.0) / (8.0 * beta)
                - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * (8.0 * beta) ** 3))
    if nu == 0:
        k += 1  # x = 0 is the zeroth zero of J_0'
    beta = (k + 0.5 * nu - 0.75) * math.pi
    return (beta - (mu + 3.0) / (8.0 * beta)
            - 4.0 * (7.0 * mu * mu + 82.0 * mu - 9.0) / (3.0 * (8.0 * beta) ** 3))


def _target(nu, kind, x):
    """Function whose zeros are sought, evaluated on an array."""
    if kind is ZeroKind.J:
        return _jn(nu, x)
    if nu == 0:
        return -_jn(1, x)
    return 0.5 * (_jn(nu - 1, x) - _jn(nu + 1, x))


def _value_and_slope(nu, kind, x):
    xs = np.array([x])
    if nu == 0:
        j0, j1 = _jn(0, xs)[0], _jn(1, xs)[0]
        if kind is ZeroKind.J:
            return j0, -j1
        # J_0'' = -J_0 + J_1/x
        return -j1, -j0 + j1 / x
    jm, j, jp = (_jn(nu - 1, xs)[0], _jn(nu, xs)[0], _jn(nu + 1, xs)[0])
    d = 0.5 * (jm - jp)
    if kind is ZeroKind.J:
        return j, d
    return d, -d / x - (1.0 - nu * nu / (x * x)) * j


def _refine(nu, kind, lo, hi, flo, guess):
    """Safeguarded Newton inside a sign-change bracket [lo, hi]."""
    x = guess if lo < guess < hi else 0.5 * (lo + hi)
    for _ in range(50):
        f, df = _value_and_slope(nu, kind, x)
        if f == 0.0:
            return x
        if (f > 0.0) == (flo > 0.0):
            lo, flo = x, f
        else:
            hi = x
        step = f / df if df != 0.0 else math.inf
        xn = x - step
        if not (lo < xn < hi):
            xn = 0.5 * (lo + hi)
        if abs(xn - x) <= 1e-15 * max(1.0, x) or hi - lo <= 4e-16 * max(1.0, x):
            return xn
        x = xn
    raise ConvergenceError(
        f"zero of {kind.value} (nu={nu}) did not converge in [{lo}, {hi}]")


_SCAN_STEP = 0.25


def zeros_below(nu, kind, xmax):
    """All positive zeros of ``J_nu`` (or ``J_nu'``) in ``(0, xmax]``."""
    kind = ZeroKind(kind)
    nu = int(nu)
    start = 0.1 if nu == 0 else float(nu)
    if xmax <= start:
        return np.empty(0)
    npts = int(math.ceil((xmax - start) / _SCAN_STEP)) + 1
    grid = np.linspace(start, xmax, max(npts, 2))
    vals = _target(nu, kind, grid)
    zeros = []
    for i in range(len(grid) - 1):
        a, b = vals[i], vals[i + 1]
        if a == 0.0:
            zeros.append(grid[i])
            continue
        if (a > 0.0) != (b > 0.0) and b != 0.0:
            guess = mcmahon(nu, kind, len(zeros) + 1)
            zeros.append(_refine(nu, kind, grid[i], grid[i + 1], a, guess))
    if vals[-1] == 0.0:
        zeros.append(grid[-1])
    return np.asarray(zeros)


def bessel_zeros(nu, kind, count):
    """First ``count`` positive zeros of ``J_nu`` or ``J_nu'``.

    Zeros are bracketed by a sign-change scan and polished by Newton's
    method started from McMahon's estimate. For ``J_0'`` the trivial zero
    at the origin is excluded.
    """
    kind = ZeroKind(kind)
    if count < 1:
        raise DomainError("count must be >= 1")
    xmax = mcmahon(nu, kind, count) + 2.0 * math.pi
    while True:
        zeros = zeros_below(nu, kind, xmax)
        if len(zeros) >= count:
            return BesselZeroTable(int(nu), kind, zeros[:count])
        xmax += (count - len(zeros) + 2) * math.pi
