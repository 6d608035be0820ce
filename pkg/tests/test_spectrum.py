import io
import math

import numpy as np
import pytest
from scipy import special

from casimir_piston import geometry, spectrum
from casimir_piston.spectrum import BC, ModeSpectrum

import oracles

PI2 = math.pi ** 2


def levels(ms, bc):
    sub = ms.select(bc)
    return sub.lambda2, sub.mult


def test_rectangle_lowest_levels():
    ms = spectrum.spectrum_rectangle(1.0, 1.0, 50)
    l2d, md = levels(ms, BC.DIRICHLET)
    l2n, mn = levels(ms, BC.NEUMANN)
    assert l2d[0] == pytest.approx(2 * PI2)
    assert l2n[0] == pytest.approx(PI2) and mn[0] == 2
    i = np.argmin(np.abs(l2d - 5 * PI2))
    assert l2d[i] == pytest.approx(5 * PI2) and md[i] == 2


def test_rectangle_against_brute_force():
    w, h = 1.0, 1.7
    ms = spectrum.spectrum_rectangle(w, h, 1500)
    d, n = oracles.rectangle_levels(w, h)
    merged = sorted([(x, 1) for x in d] + [(x, 0) for x in n])[:1500]
    ours = np.sort(ms.expanded() ** 2)
    ref = np.sort([x for x, _ in merged])
    assert np.allclose(ours, ref, rtol=1e-12)
    assert ms.cutoff_count == 1500


def test_count_is_multiplicity_weighted():
    for count in (1, 2, 3, 7, 100, 1001):
        assert spectrum.spectrum_triangle(1.0, count).cutoff_count == count
        assert spectrum.spectrum_circle(1.0, count).cutoff_count == count


def test_circle_lowest():
    ms = spectrum.spectrum_circle(1.0, 20)
    lam, mult, bc = ms.entries[0]
    assert bc is BC.NEUMANN and mult == 2
    assert lam == pytest.approx(1.8411838, abs=1e-7)
    d = ms.select(BC.DIRICHLET)
    assert d.lam[0] == pytest.approx(2.4048256, abs=1e-7) and d.mult[0] == 1


def test_circle_against_scipy_zeros():
    ms = spectrum.spectrum_circle(1.0, 800)
    d = ms.select(BC.DIRICHLET).expanded()
    ref = []
    for nu in range(0, 60):
        z = special.jn_zeros(nu, 30)
        ref += list(z) * (1 if nu == 0 else 2)
    ref = np.sort(ref)[:d.size]
    assert np.allclose(d, ref, atol=1e-10)


def test_circle_scaling_exact():
    a = spectrum.spectrum_circle(1.0, 300)
    b = spectrum.spectrum_circle(2.0, 300)
    assert np.allclose(b.lam, a.lam / 2, rtol=1e-14)
    assert np.array_equal(a.mult, b.mult)


def test_circle_3000th_mode():
    ms = spectrum.spectrum_circle(1.0, 3000)
    lam_max = ms.lam[-1]
    # combined Weyl estimate N ~ A lambda^2 / (2 pi) = lambda^2 / 2
    assert math.sqrt(2 * 3000) == pytest.approx(lam_max, rel=0.02)
    assert lam_max == pytest.approx(77.5, abs=0.1)


def test_triangle_levels():
    ms = spectrum.spectrum_triangle(1.0, 40)
    base = 16 * PI2 / 9
    lam, mult, bc = ms.entries[0]
    assert lam ** 2 == pytest.approx(base) and mult == 2 and bc is BC.NEUMANN
    d = ms.select(BC.DIRICHLET)
    assert d.lambda2[0] == pytest.approx(3 * base) and d.mult[0] == 1


def test_triangle_scaling():
    a = spectrum.spectrum_triangle(1.0, 500)
    b = spectrum.spectrum_triangle(2.0, 500)
    assert np.allclose(b.lam, a.lam / 2, rtol=1e-14)


@pytest.mark.parametrize("make,args", [(spectrum.spectrum_rectangle, (1.0, 2.0)),
                                       (spectrum.spectrum_triangle, (1.0,)),
                                       (spectrum.spectrum_circle, (1.0,))])
def test_scale_covariance(make, args):
    s = 1.7
    a = make(*args, 400)
    b = make(*[x * s for x in args], 400)
    assert np.allclose(b.lam, a.lam / s, rtol=1e-12)


def test_no_zero_mode_and_sorted():
    for ms in (spectrum.spectrum_rectangle(1, 1, 500), spectrum.spectrum_triangle(1, 500),
               spectrum.spectrum_circle(1, 500)):
        assert np.all(ms.lam > 1e-8 * ms.lam.min())
        assert np.all(np.diff(ms.lam) >= 0)


def test_weyl_square_2000():
    ms = spectrum.spectrum_rectangle(1.0, 1.0, 4000)
    rep = spectrum.weyl_check(ms, 1.0, 4.0)
    assert rep.n_modes["Dirichlet"] >= 1900
    assert rep.deviation["Dirichlet"] < 0.10
    assert rep.max_deviation < 0.10


def test_weyl_triangle_and_circle():
    for cs in (geometry.EquilateralTriangle(1.0), geometry.Circle(1.0)):
        inv = geometry.invariants(cs)
        rep = spectrum.weyl_check(spectrum.spectrum_analytic(cs, 3000), inv.A, inv.P)
        assert rep.max_deviation < 0.10


def test_neumann_count_dominates():
    ms = spectrum.spectrum_circle(1.0, 2000)
    grid = np.linspace(0.5, ms.lam[-1], 400)
    assert np.all(ms.counting(grid, BC.NEUMANN) >= ms.counting(grid, BC.DIRICHLET))


def test_truncate_straddling_level():
    ms = spectrum.spectrum_triangle(1.0, 100)
    t = ms.truncate(1)
    assert t.cutoff_count == 1 and t.mult[0] == 1
    assert ms.truncate(10 ** 6) is ms


def test_from_levels_merges_and_orders():
    ms = ModeSpectrum.from_levels([4.0, 1.0, 4.0, 4.0], [1, 1, 1, 2],
                                  ["Dirichlet", "Neumann", "Dirichlet", "Neumann"])
    assert ms.entries == [(1.0, 1, BC.NEUMANN), (2.0, 2, BC.NEUMANN), (2.0, 2, BC.DIRICHLET)]


def test_rejects_zero_and_unsorted():
    with pytest.raises(ValueError):
        ModeSpectrum(np.array([0.0, 1.0]), np.array([1, 1]), ("Dirichlet", "Dirichlet"))
    with pytest.raises(ValueError):
        ModeSpectrum(np.array([2.0, 1.0]), np.array([1, 1]), ("Dirichlet", "Dirichlet"))


def test_csv_roundtrip():
    ms = spectrum.spectrum_triangle(1.0, 60)
    text = spectrum.write_csv(ms)
    assert text.splitlines()[0] == "lambda2,multiplicity,bc"
    back = spectrum.read_csv(io.StringIO(text))
    assert np.array_equal(back.lam, ms.lam) and np.array_equal(back.mult, ms.mult)
    assert back.bc == ms.bc


def test_csv_rejects_zero_mode():
    with pytest.raises(ValueError):
        spectrum.read_csv("lambda2,multiplicity,bc\n0.0,1,Neumann\n")


def test_partition_reassembles():
    ms = spectrum.spectrum_circle(1.0, 500)
    parts = ms.partition(7)
    assert sum(p.cutoff_count for p in parts) == ms.cutoff_count
    assert np.array_equal(np.concatenate([p.lam for p in parts]), ms.lam)


def test_lowest_level_triangle():
    lam1, g1 = spectrum.spectrum_triangle(1.0, 100).lowest_level()
    assert lam1 == pytest.approx(4 * math.pi / 3) and g1 == 2


def test_analytic_dispatch():
    sq = spectrum.spectrum_analytic(geometry.RegularPolygon(4, math.sqrt(2) / 2), 50)
    assert np.allclose(sq.lam, spectrum.spectrum_rectangle(1, 1, 50).lam)
    with pytest.raises(ValueError):
        spectrum.spectrum_analytic(geometry.RegularPolygon(6, 1.0), 10)
