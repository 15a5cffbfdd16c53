import math

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from unitshapes.errors import DomainError
from unitshapes.hypgeo import (Geodesic, distance_point_to_geodesic, geodesic_from_form,
                               hypercycle_at_distance, on_arc_mod_gl2, psi_constants, psi_distance,
                               quintic_geodesic, sample_arc)
from unitshapes.lattice import UHPPoint, norm_form, quintic_gram, uhp_from_gram

HALF_LOG_5_3 = 0.5 * math.log(5 / 3)


def cosh_distance(x, y, c, rho):
    """Distance to the semicircle (c, rho): sinh d = |(x - c)^2 + y^2 - rho^2| / (2 y rho)."""
    return mpmath.asinh(abs((x - c) ** 2 + y * y - rho * rho) / (2 * y * rho))


def test_quintic_geodesic():
    with mpmath.workprec(128):
        g = quintic_geodesic()
        assert g.center == -0.5
        assert abs(g.radius - mpmath.sqrt(5) / 2) < 1e-35
        A, B = g.endpoints
        assert abs(A * A + A - 1) < 1e-35 and abs(B * B + B - 1) < 1e-35


def test_definite_form_has_no_geodesic():
    with pytest.raises(DomainError):
        geodesic_from_form((1, 1, 1))


def test_vertical_geodesic():
    g = geodesic_from_form((0, 1, 2))
    assert g.is_vertical and g.vertical == 2
    with pytest.raises(DomainError):
        hypercycle_at_distance(g, 1)


def test_psi_matches_generic_hypercycle():
    with mpmath.workprec(128):
        h = hypercycle_at_distance(quintic_geodesic(), psi_distance())
        psi = psi_constants()
        for a, b in [(h.cx, psi.cx), (h.cy, psi.cy), (h.R, psi.R), (h.A, psi.A), (h.B, psi.B)]:
            assert abs(a - b) < 1e-35


def test_psi_distance_value():
    assert abs(float(psi_distance()) - 0.2554128119) < 1e-10


def test_psi_endpoints_on_circle():
    with mpmath.workprec(128):
        psi = psi_constants()
        for x, y in (psi.arc_start, psi.arc_end):
            assert abs(psi.circle_defect(x, y)) < 1e-35
        assert max(abs(d) for d in psi.boundary_defects()) < 1e-35


def test_distance_of_corner_point():
    with mpmath.workprec(128):
        z = UHPPoint(mpmath.mpf(1) / 2, mpmath.sqrt(3) / 2)
        d = distance_point_to_geodesic(z, quintic_geodesic())
        assert abs(d - psi_distance()) < 1e-35


def test_distance_to_vertical():
    with mpmath.workprec(128):
        d = distance_point_to_geodesic(UHPPoint(1, 1), Geodesic(vertical=mpmath.mpf(0)))
        assert abs(d - mpmath.asinh(1)) < 1e-35


@pytest.mark.parametrize("mirror", [False, True])
def test_sampled_arc_is_equidistant(mirror):
    g = quintic_geodesic()
    with mpmath.workprec(128):
        for z in sample_arc(50, mirror=mirror):
            c = -g.center if mirror else g.center
            assert abs(cosh_distance(z.x, z.y, c, g.radius) - psi_distance()) < 1e-30


def test_gunit_point_is_arc_endpoint():
    with mpmath.workprec(128):
        z = UHPPoint(-mpmath.mpf(1) / 2, mpmath.sqrt(14 / mpmath.mpf(6) - mpmath.mpf(1) / 4))
        chk = on_arc_mod_gl2(z)
        assert chk.passed and chk.residual < 1e-30


def test_off_arc_point_rejected():
    chk = on_arc_mod_gl2(UHPPoint(0, 2))
    assert not chk.passed and chk.residual > 0.1


def test_spec_example_on_arc():
    with mpmath.workprec(128):
        chk = on_arc_mod_gl2(uhp_from_gram(quintic_gram(1, mpmath.mpf(3) / 10)))
        assert chk.passed and chk.residual < 1e-9
        assert abs(abs(chk.point.x) - mpmath.mpf(23) / 74) < 1e-30


coord = st.floats(min_value=-10, max_value=10, allow_nan=False)


@given(coord, coord)
def test_every_quintic_shape_lies_on_arc(a0, a1):
    assume(abs(norm_form(a0, a1)) > 1e-6)
    with mpmath.workprec(128):
        chk = on_arc_mod_gl2(uhp_from_gram(quintic_gram(a0, a1)))
        assert chk.passed, (a0, a1, chk)
        d = cosh_distance(chk.point.x, chk.point.y, (-1 if chk.point.x < 0 else 1) * mpmath.mpf(-1) / 2,
                          mpmath.sqrt(5) / 2)
        # the chosen representative is on psi or on its mirror image
        d2 = cosh_distance(chk.point.x, chk.point.y, mpmath.mpf(-1) / 2, mpmath.sqrt(5) / 2)
        assert min(abs(d - psi_distance()), abs(d2 - psi_distance())) < 1e-20


@given(st.floats(min_value=-0.5, max_value=0.5))
def test_arc_points_at_constant_distance(x):
    with mpmath.workprec(128):
        psi = psi_constants()
        x = mpmath.mpf(x)
        y = psi.cy + mpmath.sqrt(psi.R ** 2 - (x - psi.cx) ** 2)
        d = distance_point_to_geodesic(UHPPoint(x, y), quintic_geodesic())
        assert abs(d - psi_distance()) < 1e-30


def test_low_precision_uses_scaled_tolerance():
    chk = on_arc_mod_gl2(UHPPoint(0, 2), precision=64)
    assert not chk.passed
