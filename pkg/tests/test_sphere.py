import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sphtri.errors import DegenerateDual, DegenerateTriangle
from sphtri.sphere import (
    RngStream,
    TriangleMetrics,
    UnitVec3,
    arc_length,
    dual_metrics_from_poles,
    dual_vertices,
    lhuilier_excess,
    metrics_from_vertices,
    sample_uniform_point,
    sample_uniform_points,
    triangle_elements,
)

PI = math.pi

OCTANT = (UnitVec3(1, 0, 0), UnitVec3(0, 1, 0), UnitVec3(0, 0, 1))


def random_metrics(n, seed=2024):
    pts = sample_uniform_points(RngStream(seed), 3 * n).reshape(n, 3, 3)
    a, b, c, al, be, ga = triangle_elements(pts[:, 0], pts[:, 1], pts[:, 2])
    return a, b, c, al, be, ga


def as_metrics(a, b, c, al, be, ga, i) -> TriangleMetrics:
    return TriangleMetrics(
        float(a[i]), float(b[i]), float(c[i]),
        float(al[i]), float(be[i]), float(ga[i]),
        float(al[i] + be[i] + ga[i] - PI), float(a[i] + b[i] + c[i]),
    )


class TestUnitVec3:
    def test_rejects_non_unit(self):
        with pytest.raises(ValueError):
            UnitVec3(1.0, 1.0, 0.0)

    def test_from_vector_normalizes(self):
        v = UnitVec3.from_vector([3.0, 4.0, 12.0])
        assert abs(v.x**2 + v.y**2 + v.z**2 - 1.0) < 1e-12

    def test_zero_vector_rejected(self):
        with pytest.raises(ValueError):
            UnitVec3.from_vector([0.0, 0.0, 0.0])


class TestSampling:
    def test_single_sample_unit_norm(self):
        v = sample_uniform_point(RngStream(1))
        assert abs(v.x**2 + v.y**2 + v.z**2 - 1.0) < 1e-12

    def test_determinism(self):
        a = sample_uniform_points(RngStream(9, 4), 1000)
        b = sample_uniform_points(RngStream(9, 4), 1000)
        assert np.array_equal(a, b)

    def test_streams_differ(self):
        a = sample_uniform_points(RngStream(9, 0), 100)
        b = sample_uniform_points(RngStream(9, 1), 100)
        assert not np.allclose(a, b)

    def test_coordinate_means(self):
        pts = sample_uniform_points(RngStream(42), 10**6)
        means = np.abs(pts.mean(axis=0))
        assert np.all(means < 4.0 / math.sqrt(10**6))

    def test_hemisphere_fraction(self):
        pts = sample_uniform_points(RngStream(43), 10**6)
        frac = np.mean(pts[:, 2] > 0)
        assert abs(frac - 0.5) < 0.002


class TestMetrics:
    def test_octant(self):
        m = metrics_from_vertices(*OCTANT)
        for v in m.sides + m.angles:
            assert abs(v - PI / 2) < 1e-12
        assert abs(m.sigma - PI / 2) < 1e-12
        assert abs(m.tau - 3 * PI / 2) < 1e-12

    def test_degenerate_coincident(self):
        with pytest.raises(DegenerateTriangle):
            metrics_from_vertices(OCTANT[0], OCTANT[0], OCTANT[2])

    def test_degenerate_antipodal(self):
        with pytest.raises(DegenerateTriangle):
            metrics_from_vertices(UnitVec3(1, 0, 0), UnitVec3(-1, 0, 0), OCTANT[2])

    def test_girard_vs_lhuilier(self):
        # L'Huilier (sides only) is the independent oracle for the
        # angle-based excess.
        a, b, c, al, be, ga = random_metrics(10**4)
        sigma = al + be + ga - PI
        assert np.max(np.abs(sigma - lhuilier_excess(a, b, c))) < 1e-10

    def test_law_of_sines(self):
        # Cleared form: the quotient form amplifies noise when the common
        # ratio is large (thin triangles), the product form is bounded.
        a, b, c, al, be, ga = random_metrics(10**4)
        assert np.max(np.abs(np.sin(a) * np.sin(be) - np.sin(b) * np.sin(al))) < 1e-10
        assert np.max(np.abs(np.sin(b) * np.sin(ga) - np.sin(c) * np.sin(be))) < 1e-10

    def test_law_of_cosines_for_sides(self):
        a, b, c, al, be, ga = random_metrics(10**4)
        lhs = np.cos(a)
        rhs = np.cos(b) * np.cos(c) + np.sin(b) * np.sin(c) * np.cos(al)
        assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_relabeling_permutes_consistently(self):
        pts = sample_uniform_points(RngStream(5), 3)
        A, B, C = (UnitVec3.from_vector(p) for p in pts)
        m = metrics_from_vertices(A, B, C)
        mp = metrics_from_vertices(B, C, A)
        assert abs(mp.a - m.b) < 1e-12 and abs(mp.alpha - m.beta) < 1e-12
        assert abs(mp.sigma - m.sigma) < 1e-12
        assert abs(mp.tau - m.tau) < 1e-12

    def test_ranges(self):
        a, b, c, al, be, ga = random_metrics(10**4)
        for arr in (a, b, c, al, be, ga):
            assert np.all(arr >= 0.0) and np.all(arr <= PI)

    def test_mean_excess(self, primal_batch_1m):
        b = primal_batch_1m
        se = np.std(b.sigma) / math.sqrt(b.n)
        assert abs(np.mean(b.sigma) - PI / 2) < 3 * se


class TestDual:
    def test_orthogonal_cross(self):
        va, _, _ = dual_vertices(
            np.array([0.0, 0.0, 1.0]), np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])
        )
        assert np.allclose(va, [0.0, 0.0, 1.0], atol=1e-15)

    def test_degenerate_dual(self):
        p = UnitVec3(1, 0, 0)
        with pytest.raises(DegenerateDual):
            dual_metrics_from_poles(p, p, UnitVec3(0, 0, 1))

    def test_dual_metrics_valid(self):
        poles = sample_uniform_points(RngStream(11), 3)
        m = dual_metrics_from_poles(*(UnitVec3.from_vector(p) for p in poles))
        assert 0 <= m.sigma <= 2 * PI and 0 <= m.tau <= 2 * PI

    def test_duality_distribution(self, primal_batch_1m, dual_batch_1m):
        # (dual area) matches (2*pi - primal perimeter) in distribution.
        x = np.sort(2 * PI - dual_batch_1m.sigma)
        y = np.sort(primal_batch_1m.tau)
        grid = np.sort(np.concatenate([x[::97], y[::97]]))
        fx = np.searchsorted(x, grid, side="right") / len(x)
        fy = np.searchsorted(y, grid, side="right") / len(y)
        assert np.max(np.abs(fx - fy)) < 0.003


@settings(max_examples=50, deadline=None)
@given(
    st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1),
    st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1),
)
def test_arc_length_properties(x1, y1, z1, x2, y2, z2):
    u = np.array([x1, y1, z1])
    v = np.array([x2, y2, z2])
    if np.linalg.norm(u) < 1e-3 or np.linalg.norm(v) < 1e-3:
        return
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    d = float(arc_length(u, v))
    assert 0.0 <= d <= PI + 1e-15
    assert abs(d - float(arc_length(v, u))) < 1e-15
    assert abs(float(arc_length(u, u))) < 1e-7
