import math
from fractions import Fraction

import numpy as np
import pytest

from casimir_piston import geometry as g
from casimir_piston.errors import DomainError, InvalidGeometryError


def test_triangle_invariants():
    inv = g.invariants(g.EquilateralTriangle(1.0))
    assert inv.A == pytest.approx(math.sqrt(3) / 4, rel=1e-15)
    assert inv.P == 3.0
    assert inv.chi == pytest.approx(1 / 3, rel=1e-15)
    assert inv.lambda1 is None and inv.g1 is None


def test_unit_square_as_regular_polygon():
    inv = g.invariants(g.RegularPolygon(4, math.sqrt(2) / 2))
    assert inv.A == pytest.approx(1.0, rel=1e-14)
    assert inv.chi == pytest.approx(0.25, rel=1e-15)


def test_circle_invariants():
    inv = g.invariants(g.Circle(1.0))
    assert inv.A == pytest.approx(math.pi)
    assert inv.P == pytest.approx(2 * math.pi)
    assert inv.chi == pytest.approx(1 / 6)


def test_polygon_area_chi_examples():
    A, chi = g.polygon_area_chi(3, 1 / math.sqrt(3))
    assert A == pytest.approx(math.sqrt(3) / 4, rel=1e-14)
    assert chi == pytest.approx(1 / 3)
    assert g.polygon_area_chi(6, 1.0)[1] == pytest.approx(5 / 24, rel=1e-15)
    A, chi = g.polygon_area_chi(1000, 1.0)
    assert abs(A - math.pi) < 1e-4 and abs(chi - 1 / 6) < 1e-3


def test_polygon_area_chi_errors():
    with pytest.raises(DomainError):
        g.polygon_area_chi(2, 1.0)
    with pytest.raises(DomainError):
        g.polygon_area_chi(5, -1.0)


@pytest.mark.parametrize("N", range(3, 101))
def test_regular_polygon_chi_from_angles(N):
    poly = g.Polygon(tuple(map(tuple, g.regular_polygon_vertices(N, 1.3))))
    inv_poly = g.invariants(poly)
    inv_reg = g.invariants(g.RegularPolygon(N, 1.3))
    exact = float(Fraction(N - 1, 6 * (N - 2)))
    assert inv_poly.chi == pytest.approx(exact, rel=1e-12)
    assert inv_poly.A == pytest.approx(inv_reg.A, rel=1e-12)
    assert inv_poly.P == pytest.approx(inv_reg.P, rel=1e-12)
    assert inv_reg.chi == exact


def test_chi_ordering():
    chis = [g.invariants(s).chi for s in (g.EquilateralTriangle(1), g.Rectangle(1, 1),
                                         g.RegularPolygon(6, 1), g.Circle(1))]
    assert chis[0] > chis[1] > chis[2] > chis[3]


@pytest.mark.parametrize("cs", [g.Rectangle(1, 2), g.Circle(0.7), g.EquilateralTriangle(2),
                                g.RegularPolygon(7, 1.1),
                                g.Polygon(((0, 0), (2, 0), (1.5, 1), (0.2, 0.8)))])
@pytest.mark.parametrize("s", [0.3, 2.5])
def test_scaling(cs, s):
    a, b = g.invariants(cs), g.invariants(g.scale(cs, s))
    assert b.A == pytest.approx(a.A * s * s, rel=1e-13)
    assert b.P == pytest.approx(a.P * s, rel=1e-13)
    assert b.chi == pytest.approx(a.chi, rel=1e-13)


def test_rectangle_chi_generic():
    assert g.invariants(g.Rectangle(1.0, 3.0)).chi == pytest.approx(0.25)


def test_invalid_geometries():
    with pytest.raises(InvalidGeometryError):
        g.Rectangle(0.0, 1.0)
    with pytest.raises(InvalidGeometryError):
        g.Circle(-1.0)
    with pytest.raises(InvalidGeometryError):
        g.RegularPolygon(2, 1.0)
    with pytest.raises(InvalidGeometryError):
        g.Polygon(((0, 0), (1, 0), (1, 0), (0, 1)))
    with pytest.raises(InvalidGeometryError):
        g.Polygon(((0, 0), (1, 0), (2, 0)))
    with pytest.raises(InvalidGeometryError):
        g.Polygon(((0, 0), (0, 1), (1, 0)))  # clockwise
    with pytest.raises(InvalidGeometryError):
        g.Polygon(((0, 0), (1, 1), (1, 0), (0, 1)))  # bow tie


def test_reflex_polygon_warns():
    L_shape = ((0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2))
    with pytest.warns(RuntimeWarning):
        inv = g.invariants(g.Polygon(L_shape))
    assert inv.A == pytest.approx(3.0)
    # five right angles and one 3pi/2 reflex angle
    expected = (5 * (2 - 0.5) + (2 / 3 - 1.5)) / 24
    assert inv.chi == pytest.approx(expected)


def test_contains():
    tri = g.EquilateralTriangle(1.0)
    assert g.contains(tri, 0.5, 0.2)
    assert not g.contains(tri, 0.9, 0.8)
    assert not g.contains(tri, 0.5, 0.0)
    assert g.contains(tri, 0.5, 0.0, strict=False)
    x = np.array([0.0, 0.5, 0.99])
    assert g.contains(g.Circle(1.0), x, 0 * x).tolist() == [True, True, True]


def test_reference_length():
    assert g.reference_length(g.EquilateralTriangle(2.0)) == 2.0
    assert g.reference_length(g.Circle(3.0)) == 3.0
    assert g.reference_length(g.Rectangle(4.0, 1.0)) == 4.0
