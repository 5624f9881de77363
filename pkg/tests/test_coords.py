import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphtri.coords import (
    CoordKind,
    CoordTriple,
    area_element,
    defining_parameters,
    embed,
    embedding_point,
    jacobian_fd_check,
    rotation_tilt,
    rotation_x,
)
from sphtri.errors import NoSuchTriangle

PI = math.pi

INTERIOR_GRID = [
    (float(u), float(v), float(k))
    for u in np.linspace(0.3, PI - 0.3, 5)
    for v in np.linspace(0.3, PI - 0.3, 5)
    for k in np.linspace(0.5, PI - 0.5, 3)
]


class TestCoordTriple:
    def test_range_validation(self):
        with pytest.raises(ValueError):
            CoordTriple(CoordKind.PRIMAL, -0.1, 1.0, 1.0)
        with pytest.raises(ValueError):
            CoordTriple(CoordKind.PRIMAL, 0.1, 1.0, PI + 0.1)

    def test_interior_flag(self):
        assert CoordTriple(CoordKind.DUAL, 0.1, 0.1, 0.1).interior
        assert not CoordTriple(CoordKind.DUAL, 0.0, 0.1, 0.1).interior


class TestRotations:
    def test_tilt_image_on_meridian(self):
        # With the tilt axis at azimuth pi/2, (1,0,0) sweeps the xz meridian.
        for theta in (0.3, 1.2, 2.9):
            img = rotation_tilt(PI / 2, theta) @ np.array([1.0, 0.0, 0.0])
            assert np.allclose(img, [math.cos(theta), 0.0, math.sin(theta)], atol=1e-14)

    def test_tilt_axis_zero_spins_meridian(self):
        img = rotation_tilt(0.0, 0.7) @ np.array([0.0, -1.0, 0.0])
        assert np.allclose(img, [0.0, -math.cos(0.7), math.sin(0.7)], atol=1e-14)

    @settings(max_examples=60, deadline=None)
    @given(st.floats(0, PI), st.floats(0, PI))
    def test_orthogonal_det_one(self, rho, theta):
        for M in (rotation_x(theta), rotation_tilt(rho, theta)):
            assert np.max(np.abs(M @ M.T - np.eye(3))) < 1e-12
            assert abs(np.linalg.det(M) - 1.0) < 1e-12


class TestEmbed:
    def test_primal_octant(self):
        m = embed(CoordTriple(CoordKind.PRIMAL, PI / 2, PI / 2, PI / 2))
        for v in m.sides + m.angles:
            assert abs(v - PI / 2) < 1e-12

    def test_primal_theta_zero_limit(self):
        # As theta -> 0 the third vertex flattens into the equator.
        rho = 1.1
        p = embedding_point(CoordTriple(CoordKind.PRIMAL, 1e-12, rho, 0.9))
        assert np.allclose(p, [math.cos(rho), math.sin(rho), 0.0], atol=1e-11)

    @pytest.mark.parametrize("kind", list(CoordKind))
    def test_round_trip(self, kind):
        for u, v, k in INTERIOR_GRID:
            m = embed(CoordTriple(kind, u, v, k))
            got = defining_parameters(kind, m)
            assert max(abs(g - w) for g, w in zip(got, (u, v, k))) < 1e-9

    def test_boundary_rejected(self):
        with pytest.raises(NoSuchTriangle):
            embed(CoordTriple(CoordKind.ANGLE, 0.0, 1.0, 1.0))


class TestAreaElement:
    def test_primal_equator(self):
        assert area_element(CoordTriple(CoordKind.PRIMAL, 1.0, PI / 2, 2.0)) == 1.0

    def test_dual_is_sin_theta(self):
        assert abs(area_element(CoordTriple(CoordKind.DUAL, 1.0, 0.7, 2.0)) - math.sin(0.7)) < 1e-15

    def test_angle_octant(self):
        # All cosines vanish; the rational expression collapses to 1.
        assert abs(area_element(CoordTriple(CoordKind.ANGLE, PI / 2, PI / 2, PI / 2)) - 1.0) < 1e-14

    def test_angle_vanishes_at_phi_zero(self):
        assert area_element(CoordTriple(CoordKind.ANGLE, 1e-9, 1.0, 1.5)) < 1e-8

    def test_boundary_zero(self):
        assert area_element(CoordTriple(CoordKind.SIDE, 0.0, 1.0, 1.0)) == 0.0


class TestJacobianCheck:
    @pytest.mark.parametrize(
        "kind,u,v,k",
        [
            (CoordKind.PRIMAL, PI / 3, PI / 4, PI / 2),
            (CoordKind.SIDE, PI / 3, PI / 3, PI / 2),
            (CoordKind.DUAL, PI / 2, PI / 2, PI / 2),
            (CoordKind.ANGLE, 1.1, 2.0, 0.8),
        ],
    )
    def test_spot_points(self, kind, u, v, k):
        assert jacobian_fd_check(CoordTriple(kind, u, v, k), 1e-5) < 1e-6

    def test_step_validation(self):
        with pytest.raises(ValueError):
            jacobian_fd_check(CoordTriple(CoordKind.PRIMAL, 1, 1, 1), 1e-8)

    @pytest.mark.parametrize("kind", list(CoordKind))
    def test_grid(self, kind):
        worst = max(
            jacobian_fd_check(CoordTriple(kind, u, v, k), 1e-5)
            for u, v, k in INTERIOR_GRID
        )
        assert worst < 1e-6


def test_jacobians_integrate_to_total_measure():
    # Each system's area element integrates to 2*pi over the full square
    # (the measure of the free point/pole given the fixed element).
    from sphtri.coords import angle_jacobian, side_jacobian
    from sphtri.quadrature import QuadratureSpec, integrate

    for jac in (angle_jacobian, side_jacobian):
        for kappa in (0.8, PI / 2, 2.4):
            def outer(us):
                out = []
                for u in np.atleast_1d(us):
                    r = integrate(
                        lambda v: jac(float(u), v, kappa), 0.0, PI,
                        QuadratureSpec(abs_tol=1e-10, rel_tol=1e-10),
                    )
                    out.append(r.value)
                return np.array(out)

            total = integrate(outer, 0.0, PI, QuadratureSpec(abs_tol=1e-9, rel_tol=1e-9))
            assert abs(total.value - 2 * PI) < 1e-7
