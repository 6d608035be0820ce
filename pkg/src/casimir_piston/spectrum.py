"""Eigenvalue spectra of the 2D Laplacian on the piston cross section.

The force formulas only need the combined multiset {lambda_p}: Dirichlet
eigenvalues (one mode family) together with the nonzero Neumann
eigenvalues (the other). The constant Neumann mode carries no field and
is never part of a :class:`ModeSpectrum`.
"""
import csv
import enum
import io
import math
from dataclasses import dataclass

import numpy as np

from . import geometry
from .errors import DomainError
from .specfun import ZeroKind, zeros_below

__all__ = [
    "BC", "ModeSpectrum", "WeylReport", "spectrum_rectangle", "spectrum_circle",
    "spectrum_triangle", "spectrum_analytic", "weyl_count", "weyl_check",
    "read_csv", "write_csv",
]


class BC(str, enum.Enum):
    DIRICHLET = "Dirichlet"
    NEUMANN = "Neumann"

    @property
    def eta(self):
        """+1 for Dirichlet, -1 for Neumann."""
        return 1 if self is BC.DIRICHLET else -1


_MERGE_RTOL = 1e-11


@dataclass(frozen=True, eq=False)
class ModeSpectrum:
    """Sorted multiset of Laplacian eigenvalues tagged by boundary condition.

    Attributes
    ----------
    lam : ndarray
        Eigenvalues lambda (1/length, not squared), ascending, all > 0.
    mult : ndarray of int
        Multiplicity of each entry.
    bc : tuple of BC
        Boundary condition of each entry.
    source : str
        ``"analytic"``, ``"numerical"`` or ``"file"``.
    """

    lam: np.ndarray
    mult: np.ndarray
    bc: tuple
    source: str = "analytic"

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        mult = np.array(self.mult, dtype=np.int64)
        bc = tuple(BC(b) for b in self.bc)
        if not (lam.ndim == 1 and lam.shape == mult.shape and len(bc) == lam.size):
            raise ValueError("lam, mult and bc must be equal-length sequences")
        if lam.size and (np.any(~np.isfinite(lam)) or np.any(lam <= 0.0)):
            raise ValueError("eigenvalues must be finite and positive (zero mode excluded)")
        if np.any(np.diff(lam) < 0.0):
            raise ValueError("eigenvalues must be sorted ascending")
        if np.any(mult < 1):
            raise ValueError("multiplicities must be >= 1")
        lam.setflags(write=False)
        mult.setflags(write=False)
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "mult", mult)
        object.__setattr__(self, "bc", bc)

    @classmethod
    def from_levels(cls, lambda2, mult, bc, source="analytic", count=None):
        """Build a spectrum from unsorted squared eigenvalues.

        Entries with the same boundary condition whose ``lambda2`` agree to
        a relative 1e-11 are merged. With ``count`` the result is cut to the
        first ``count`` modes counted with multiplicity; a degenerate level
        straddling the cut keeps only the part that fits.
        """
        lambda2 = np.asarray(lambda2, dtype=float)
        mult = np.asarray(mult, dtype=np.int64)
        bc = np.asarray([BC(b).value for b in bc])
        keep_l2, keep_m, keep_bc = [], [], []
        for tag in (BC.DIRICHLET, BC.NEUMANN):
            sel = bc == tag.value
            if not np.any(sel):
                continue
            l2, m = lambda2[sel], mult[sel]
            order = np.argsort(l2, kind="stable")
            l2, m = l2[order], m[order]
            new_level = np.ones(l2.size, dtype=bool)
            new_level[1:] = np.diff(l2) > _MERGE_RTOL * l2[1:]
            starts = np.flatnonzero(new_level)
            keep_l2.append(l2[starts])
            keep_m.append(np.add.reduceat(m, starts))
            keep_bc.extend([tag] * starts.size)
        if not keep_l2:
            return cls(np.empty(0), np.empty(0, dtype=np.int64), (), source)
        l2 = np.concatenate(keep_l2)
        m = np.concatenate(keep_m)
        tags = np.asarray(keep_bc, dtype=object)
        order = np.lexsort((np.array([t.eta for t in tags]), l2))
        spec = cls(np.sqrt(l2[order]), m[order], tuple(tags[order]), source)
        return spec if count is None else spec.truncate(count)

    def __len__(self):
        return int(self.lam.size)

    @property
    def lambda2(self):
        return self.lam ** 2

    @property
    def cutoff_count(self):
        """Total number of modes counted with multiplicity."""
        return int(self.mult.sum())

    @property
    def entries(self):
        """List of ``(lambda, multiplicity, bc)`` tuples."""
        return [(float(l), int(m), b) for l, m, b in zip(self.lam, self.mult, self.bc)]

    def expanded(self):
        """Eigenvalues repeated according to multiplicity."""
        return np.repeat(self.lam, self.mult)

    def truncate(self, count):
        """First ``count`` modes counted with multiplicity."""
        if count < 1:
            raise DomainError("count must be >= 1")
        cum = np.cumsum(self.mult)
        n = int(np.searchsorted(cum, count)) + 1
        if n > len(self):
            return self
        mult = self.mult[:n].copy()
        mult[-1] -= int(cum[n - 1] - count)
        return ModeSpectrum(self.lam[:n], mult, self.bc[:n], self.source)

    def select(self, bc):
        """Sub-spectrum of a single boundary condition."""
        bc = BC(bc)
        idx = [i for i, b in enumerate(self.bc) if b is bc]
        return ModeSpectrum(self.lam[idx], self.mult[idx], tuple(self.bc[i] for i in idx),
                            self.source)

    def scaled(self, s):
        """Spectrum of the cross section enlarged by ``s`` (lambda -> lambda/s)."""
        return ModeSpectrum(self.lam / s, self.mult, self.bc, self.source)

    def with_multiplicities(self, mult):
        return ModeSpectrum(self.lam, mult, self.bc, self.source)

    def partition(self, parts):
        """Split into ``parts`` contiguous sub-spectra."""
        bounds = np.linspace(0, len(self), parts + 1).round().astype(int)
        return [ModeSpectrum(self.lam[a:b], self.mult[a:b], self.bc[a:b], self.source)
                for a, b in zip(bounds[:-1], bounds[1:])]

    def lowest_level(self, rtol=1e-9):
        """Smallest eigenvalue and its total degeneracy over both BCs."""
        if not len(self):
            raise ValueError("empty spectrum")
        lam1 = float(self.lam[0])
        g1 = int(self.mult[np.abs(self.lam - lam1) <= rtol * lam1].sum())
        return lam1, g1

    def counting(self, lam, bc=None):
        """Number of modes with eigenvalue <= ``lam`` (optionally one BC)."""
        spec = self if bc is None else self.select(bc)
        cum = np.concatenate(([0], np.cumsum(spec.mult)))
        return cum[np.searchsorted(spec.lam, lam, side="right")]


# -- analytic spectra --------------------------------------------------------

def _weyl_lambda2(area, count):
    """Rough lambda^2 below which ``count`` combined modes should lie."""
    return 2.0 * math.pi * count / area


def spectrum_rectangle(w, h, count):
    """Dirichlet and Neumann spectrum of the ``w`` x ``h`` rectangle.

    ``lambda^2 = pi^2 (n^2/w^2 + m^2/h^2)`` with ``n, m >= 1`` (Dirichlet) or
    ``n, m >= 0`` not both zero (Neumann).
    """
    geometry.Rectangle(w, h)
    if count < 1:
        raise DomainError("count must be >= 1")
    l2max = 1.3 * _weyl_lambda2(w * h, count) + 4.0 * (math.pi / min(w, h)) ** 2
    while True:
        nmax = int(math.sqrt(l2max) * w / math.pi) + 1
        mmax = int(math.sqrt(l2max) * h / math.pi) + 1
        n, m = np.meshgrid(np.arange(nmax + 1), np.arange(mmax + 1), indexing="ij")
        n, m = n.ravel(), m.ravel()
        l2 = math.pi ** 2 * ((n / w) ** 2 + (m / h) ** 2)
        dir_sel = (n >= 1) & (m >= 1) & (l2 <= l2max)
        neu_sel = ((n + m) >= 1) & (l2 <= l2max)
        total = int(dir_sel.sum() + neu_sel.sum())
        if total >= count:
            break
        l2max *= 1.5
    lambda2 = np.concatenate((l2[dir_sel], l2[neu_sel]))
    bc = [BC.DIRICHLET] * int(dir_sel.sum()) + [BC.NEUMANN] * int(neu_sel.sum())
    return ModeSpectrum.from_levels(lambda2, np.ones(lambda2.size, dtype=np.int64), bc,
                                    count=count)


def spectrum_triangle(a, count):
    """Spectrum of the equilateral triangle of side ``a``.

    ``lambda^2 = (16 pi^2 / 9 a^2)(m^2 + m n + n^2)`` over ``m >= n >= 1``
    (Dirichlet) or ``m >= n >= 0`` without ``(0, 0)`` (Neumann); pairs with
    ``m > n`` are doubly degenerate.
    """
    geometry.EquilateralTriangle(a)
    if count < 1:
        raise DomainError("count must be >= 1")
    unit = 16.0 * math.pi ** 2 / (9.0 * a * a)
    qmax = int(1.3 * _weyl_lambda2(math.sqrt(3.0) / 4.0 * a * a, count) / unit) + 4
    while True:
        mmax = int(math.sqrt(qmax)) + 1
        m, n = np.meshgrid(np.arange(mmax + 1), np.arange(mmax + 1), indexing="ij")
        m, n = m.ravel(), n.ravel()
        q = m * m + m * n + n * n
        ok = (m >= n) & (q <= qmax) & (q > 0)
        deg = np.where(m > n, 2, 1)
        dir_sel = ok & (n >= 1)
        total = int(deg[dir_sel].sum() + deg[ok].sum())
        if total >= count:
            break
        qmax = int(qmax * 1.5) + 1
    lambda2 = unit * np.concatenate((q[dir_sel], q[ok])).astype(float)
    mult = np.concatenate((deg[dir_sel], deg[ok]))
    bc = [BC.DIRICHLET] * int(dir_sel.sum()) + [BC.NEUMANN] * int(ok.sum())
    return ModeSpectrum.from_levels(lambda2, mult, bc, count=count)


def spectrum_circle(R, count):
    """Spectrum of the disc of radius ``R`` from Bessel zeros.

    Dirichlet: ``lambda = j_{nu,k} / R``; Neumann: ``lambda = j'_{nu,k} / R``.
    Orders ``nu >= 1`` are doubly degenerate.
    """
    geometry.Circle(R)
    if count < 1:
        raise DomainError("count must be >= 1")
    xmax = math.sqrt(1.2 * 2.0 * count) + 4.0
    while True:
        lams, mults, bcs = [], [], []
        nu = 0
        while nu < xmax:
            deg = 1 if nu == 0 else 2
            for kind, tag in ((ZeroKind.J, BC.DIRICHLET), (ZeroKind.JP, BC.NEUMANN)):
                z = zeros_below(nu, kind, xmax)
                lams.append(z)
                mults.append(np.full(z.size, deg))
                bcs.extend([tag] * z.size)
            nu += 1
        mult = np.concatenate(mults)
        if int(mult.sum()) >= count:
            break
        xmax *= 1.2
    lam = np.concatenate(lams) / R
    return ModeSpectrum.from_levels(lam ** 2, mult, bcs, count=count)


def spectrum_analytic(cs, count):
    """Closed-form spectrum for the cross sections that have one."""
    if isinstance(cs, geometry.Rectangle):
        return spectrum_rectangle(cs.w, cs.h, count)
    if isinstance(cs, geometry.Circle):
        return spectrum_circle(cs.R, count)
    if isinstance(cs, geometry.EquilateralTriangle):
        return spectrum_triangle(cs.a, count)
    if isinstance(cs, geometry.RegularPolygon) and cs.N == 3:
        return spectrum_triangle(cs.Rc * math.sqrt(3.0), count)
    if isinstance(cs, geometry.RegularPolygon) and cs.N == 4:
        side = cs.Rc * math.sqrt(2.0)
        return spectrum_rectangle(side, side, count)
    raise DomainError(f"no analytic spectrum for {cs!r}; use a numerical solver")


# -- Weyl's law --------------------------------------------------------------

def weyl_count(lam, area, perimeter, bc):
    """Two-term Weyl estimate of the counting function.

    ``N(lambda) = (A lambda^2 - eta P lambda) / (4 pi)`` with ``eta = +1``
    for Dirichlet and ``-1`` for Neumann.
    """
    lam = np.asarray(lam, dtype=float)
    return (area * lam ** 2 - BC(bc).eta * perimeter * lam) / (4.0 * math.pi)


@dataclass(frozen=True)
class WeylReport:
    """Largest relative deviation from Weyl's law over the upper half."""

    deviation: dict
    n_modes: dict
    lambda_max: float
    combined_count: int

    @property
    def max_deviation(self):
        return max(self.deviation.values())


def weyl_check(ms, A, P):
    """Compare each BC's counting function with the two-term Weyl law.

    The counting function is taken at the midpoint of its jump at every
    eigenvalue in the upper half of the (multiplicity-weighted) spectrum.
    """
    deviation, n_modes = {}, {}
    for tag in (BC.DIRICHLET, BC.NEUMANN):
        sub = ms.select(tag)
        if not len(sub):
            continue
        cum = np.cumsum(sub.mult)
        upper = cum > 0.5 * cum[-1]
        mid = cum[upper] - 0.5 * sub.mult[upper]
        if tag is BC.NEUMANN:
            mid = mid + 1  # the excluded constant mode
        weyl = weyl_count(sub.lam[upper], A, P, tag)
        deviation[tag.value] = float(np.max(np.abs(mid - weyl) / weyl))
        n_modes[tag.value] = int(cum[-1])
    return WeylReport(deviation, n_modes, float(ms.lam[-1]), ms.cutoff_count)


# -- CSV exchange ------------------------------------------------------------

CSV_COLUMNS = ("lambda2", "multiplicity", "bc")


def write_csv(ms, fh=None):
    """Write ``lambda2,multiplicity,bc`` rows; returns the text if ``fh`` is None."""
    own = fh is None
    if own:
        fh = io.StringIO()
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for l2, m, b in zip(ms.lambda2, ms.mult, ms.bc):
        writer.writerow((repr(float(l2)), int(m), b.value))
    if own:
        return fh.getvalue()
    return None


def read_csv(fh, source="file"):
    """Read a spectrum written by :func:`write_csv` (or by external tools).

    Rows with ``lambda2 <= 0`` are rejected: the zero mode must already be
    excluded.
    """
    if isinstance(fh, str):
        fh = io.StringIO(fh)
    reader = csv.DictReader(fh)
    if reader.fieldnames is None or tuple(f.strip() for f in reader.fieldnames) != CSV_COLUMNS:
        raise ValueError(f"spectrum CSV header must be {','.join(CSV_COLUMNS)}")
    l2, mult, bc = [], [], []
    for row in reader:
        row = {k.strip(): v.strip() for k, v in row.items()}
        value = float(row["lambda2"])
        if not value > 0:
            raise ValueError(f"nonpositive lambda2 {value} in spectrum file")
        l2.append(value)
        mult.append(int(row["multiplicity"]))
        bc.append(BC(row["bc"]))
    return ModeSpectrum.from_levels(l2, mult, bc, source=source)
