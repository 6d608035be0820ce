"""Piston cross sections and their geometric invariants.

The curvature parameter chi combines the interior vertex angles ``alpha_i``
and the integrated curvature of the smooth boundary pieces::

    chi = 1/24 * sum_i (pi/alpha_i - alpha_i/pi) + 1/(12 pi) * sum_j int kappa

It enters the sub-leading near-field force.
"""
import math
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional, Tuple, Union

import numpy as np

from .errors import DomainError, InvalidGeometryError

__all__ = [
    "Rectangle", "Circle", "EquilateralTriangle", "RegularPolygon", "Polygon",
    "CrossSection", "GeometryInvariants", "invariants", "polygon_area_chi",
    "regular_polygon_vertices", "scale", "reference_length", "contains",
    "bounding_box",
]


def _positive(name, value):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise InvalidGeometryError(f"{name} must be a positive finite length, got {value!r}")


@dataclass(frozen=True)
class Rectangle:
    w: float
    h: float

    def __post_init__(self):
        _positive("w", self.w)
        _positive("h", self.h)


@dataclass(frozen=True)
class Circle:
    R: float

    def __post_init__(self):
        _positive("R", self.R)


@dataclass(frozen=True)
class EquilateralTriangle:
    a: float

    def __post_init__(self):
        _positive("a", self.a)


@dataclass(frozen=True)
class RegularPolygon:
    """Regular N-gon with circumradius ``Rc``, one vertex on the +x axis."""

    N: int
    Rc: float

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 3:
            raise InvalidGeometryError(f"N must be an integer >= 3, got {self.N!r}")
        _positive("Rc", self.Rc)


@dataclass(frozen=True)
class Polygon:
    """Simple polygon given by counterclockwise vertices (not closed)."""

    vertices: Tuple[Tuple[float, float], ...]

    def __post_init__(self):
        verts = tuple((float(x), float(y)) for x, y in self.vertices)
        object.__setattr__(self, "vertices", verts)
        _validate_polygon(np.asarray(verts))


CrossSection = Union[Rectangle, Circle, EquilateralTriangle, RegularPolygon, Polygon]


@dataclass(frozen=True)
class GeometryInvariants:
    """Area, perimeter, curvature parameter and (optionally) lowest mode."""

    A: float
    P: float
    chi: float
    lambda1: Optional[float] = None
    g1: Optional[int] = None

    def with_lowest_mode(self, lambda1, g1):
        return replace(self, lambda1=float(lambda1), g1=int(g1))


def _segments_intersect(p1, p2, q1, q2):
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    return (d1 * d2 < 0) and (d3 * d4 < 0)


def _signed_area(v):
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))


def _validate_polygon(v):
    n = len(v)
    if v.ndim != 2 or v.shape[1] != 2 or n < 3:
        raise InvalidGeometryError("polygon needs at least three 2D vertices")
    if not np.all(np.isfinite(v)):
        raise InvalidGeometryError("polygon vertices must be finite")
    edges = np.roll(v, -1, axis=0) - v
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    scale_ = float(np.max(lengths))
    if np.any(lengths <= 1e-12 * scale_):
        raise InvalidGeometryError("polygon has repeated consecutive vertices")
    area = _signed_area(v)
    if abs(area) <= 1e-12 * scale_ * scale_:
        raise InvalidGeometryError("polygon has zero area")
    if area < 0:
        raise InvalidGeometryError("polygon vertices must be counterclockwise")
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n]):
                raise InvalidGeometryError("polygon is self-intersecting")


def regular_polygon_vertices(N, Rc):
    """Counterclockwise vertices of the regular N-gon, first on +x axis."""
    t = 2.0 * math.pi * np.arange(N) / N
    return np.column_stack((Rc * np.cos(t), Rc * np.sin(t)))


def _vertices(cs):
    if isinstance(cs, Polygon):
        return np.asarray(cs.vertices)
    if isinstance(cs, Rectangle):
        return np.array([[0.0, 0.0], [cs.w, 0.0], [cs.w, cs.h], [0.0, cs.h]])
    if isinstance(cs, EquilateralTriangle):
        a = cs.a
        return np.array([[0.0, 0.0], [a, 0.0], [0.5 * a, 0.5 * math.sqrt(3.0) * a]])
    if isinstance(cs, RegularPolygon):
        return regular_polygon_vertices(cs.N, cs.Rc)
    return None


def _interior_angles(v):
    prev = np.roll(v, 1, axis=0) - v
    nxt = np.roll(v, -1, axis=0) - v
    # angle swept counterclockwise from the outgoing to the incoming edge
    cross = nxt[:, 0] * prev[:, 1] - nxt[:, 1] * prev[:, 0]
    dot = np.sum(nxt * prev, axis=1)
    ang = np.arctan2(cross, dot)
    return np.where(ang <= 0.0, ang + 2.0 * math.pi, ang)


def _chi_from_angles(alpha):
    return float(np.sum(math.pi / alpha - alpha / math.pi)) / 24.0


def polygon_area_chi(N, Rc):
    """Closed-form area and chi of the regular N-gon of circumradius Rc.

    ``A = sin(2 pi/N)/(2 pi/N) * pi Rc^2`` and ``chi = (N-1)/(6(N-2))``.
    """
    if not isinstance(N, (int, np.integer)) or N < 3:
        raise DomainError(f"N must be an integer >= 3, got {N!r}")
    if not Rc > 0:
        raise DomainError("Rc must be positive")
    theta = 2.0 * math.pi / N
    area = math.sin(theta) / theta * math.pi * Rc * Rc
    chi = float(Fraction(N - 1, 6 * (N - 2)))
    return area, chi


def invariants(cs):
    """Area, perimeter and curvature parameter of a cross section.

    ``lambda1`` and ``g1`` are left unset; see
    :meth:`ModeSpectrum.lowest_level <casimir_piston.spectrum.ModeSpectrum.lowest_level>`.
    """
    if isinstance(cs, Circle):
        # pure curvature term: kappa = 1/R integrated over 2 pi R
        return GeometryInvariants(A=math.pi * cs.R ** 2, P=2.0 * math.pi * cs.R,
                                  chi=1.0 / 6.0)
    if isinstance(cs, Rectangle):
        return GeometryInvariants(A=cs.w * cs.h, P=2.0 * (cs.w + cs.h), chi=0.25)
    if isinstance(cs, EquilateralTriangle):
        return GeometryInvariants(A=math.sqrt(3.0) / 4.0 * cs.a ** 2, P=3.0 * cs.a,
                                  chi=1.0 / 3.0)
    if isinstance(cs, RegularPolygon):
        area, chi = polygon_area_chi(cs.N, cs.Rc)
        side = 2.0 * cs.Rc * math.sin(math.pi / cs.N)
        return GeometryInvariants(A=area, P=cs.N * side, chi=chi)
    if isinstance(cs, Polygon):
        v = np.asarray(cs.vertices)
        edges = np.roll(v, -1, axis=0) - v
        alpha = _interior_angles(v)
        if np.any(alpha > math.pi + 1e-12):
            warnings.warn("polygon has reflex vertices; the curvature parameter "
                          "is evaluated formally", RuntimeWarning, stacklevel=2)
        return GeometryInvariants(A=_signed_area(v),
                                  P=float(np.sum(np.hypot(edges[:, 0], edges[:, 1]))),
                                  chi=_chi_from_angles(alpha))
    raise TypeError(f"unsupported cross section {cs!r}")


def scale(cs, s):
    """The cross section enlarged by the factor ``s > 0``."""
    if not s > 0:
        raise DomainError("scale factor must be positive")
    if isinstance(cs, Rectangle):
        return Rectangle(cs.w * s, cs.h * s)
    if isinstance(cs, Circle):
        return Circle(cs.R * s)
    if isinstance(cs, EquilateralTriangle):
        return EquilateralTriangle(cs.a * s)
    if isinstance(cs, RegularPolygon):
        return RegularPolygon(cs.N, cs.Rc * s)
    if isinstance(cs, Polygon):
        return Polygon(tuple((x * s, y * s) for x, y in cs.vertices))
    raise TypeError(f"unsupported cross section {cs!r}")


def reference_length(cs):
    """Length used to make CLI outputs dimensionless.

    Triangle side ``a``, circle radius ``R``, rectangle width ``w``,
    circumradius ``Rc`` for regular polygons and ``sqrt(A)`` otherwise.
    """
    if isinstance(cs, EquilateralTriangle):
        return cs.a
    if isinstance(cs, Circle):
        return cs.R
    if isinstance(cs, Rectangle):
        return cs.w
    if isinstance(cs, RegularPolygon):
        return cs.Rc
    return math.sqrt(invariants(cs).A)


def bounding_box(cs):
    """``(xmin, ymin, xmax, ymax)`` of the cross section."""
    if isinstance(cs, Circle):
        return (-cs.R, -cs.R, cs.R, cs.R)
    v = _vertices(cs)
    return (float(v[:, 0].min()), float(v[:, 1].min()),
            float(v[:, 0].max()), float(v[:, 1].max()))


def contains(cs, x, y, strict=True, tol=1e-9):
    """Vectorized point-in-cross-section test.

    With ``strict=True`` points within ``tol`` (relative to the size) of
    the boundary count as outside, otherwise as inside.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    xmin, ymin, xmax, ymax = bounding_box(cs)
    eps = tol * max(xmax - xmin, ymax - ymin)
    if isinstance(cs, Circle):
        d = cs.R - np.hypot(x, y)
        return d > eps if strict else d >= -eps
    v = _vertices(cs)
    # signed distance to the boundary (positive inside), polygons only
    inside = np.zeros(x.shape, dtype=bool)
    dmin = np.full(x.shape, np.inf)
    n = len(v)
    for i in range(n):
        (x1, y1), (x2, y2) = v[i], v[(i + 1) % n]
        crosses = ((y1 > y) != (y2 > y)) & (
            x < (x2 - x1) * (y - y1) / np.where(y2 != y1, y2 - y1, 1.0) + x1)
        inside ^= crosses
        ex, ey = x2 - x1, y2 - y1
        t = np.clip(((x - x1) * ex + (y - y1) * ey) / (ex * ex + ey * ey), 0.0, 1.0)
        dmin = np.minimum(dmin, np.hypot(x - x1 - t * ex, y - y1 - t * ey))
    if strict:
        return inside & (dmin > eps)
    return inside | (dmin <= eps)
