import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.errors import GeometryError
from core.models import PointScatterer
from scattering.geometry import (
    BoundaryCurve,
    Scatterer,
    Scene,
    curve_derivatives,
    curve_point,
    outward_normal,
    quadrature_nodes,
)

CURVES = [
    BoundaryCurve('kite'),
    BoundaryCurve('peanut', (1.0, -2.0)),
    BoundaryCurve('pear', (-3.0, 0.5)),
    BoundaryCurve('circle', (0.5, 0.5), 2.0),
]
parameters = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)


class TestCurves:
    def test_known_points(self):
        np.testing.assert_allclose(curve_point(BoundaryCurve('kite'), 0.0), [1.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(curve_point(BoundaryCurve('circle', radius=2.0), math.pi / 2), [0.0, 2.0], atol=1e-15)
        np.testing.assert_allclose(curve_point(BoundaryCurve('peanut'), 0.0), [4.0, 0.0], atol=1e-15)
        np.testing.assert_allclose(curve_point(BoundaryCurve('pear', (1.0, 1.0)), 0.0), [3.3, 1.0], atol=1e-15)

    @pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.kind)
    def test_derivatives_match_finite_differences(self, curve):
        t = np.linspace(0.0, 2.0 * math.pi, 37)
        h = 1e-5
        first, second = curve_derivatives(curve, t)
        central = (curve_point(curve, t + h) - curve_point(curve, t - h)) / (2 * h)
        np.testing.assert_allclose(first, central, atol=1e-8)
        d_first = (curve_derivatives(curve, t + h)[0] - curve_derivatives(curve, t - h)[0]) / (2 * h)
        np.testing.assert_allclose(second, d_first, atol=1e-8)

    @pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.kind)
    def test_normal_is_unit_and_outward(self, curve):
        t = np.linspace(0.0, 2.0 * math.pi, 64, endpoint=False)
        normal = outward_normal(curve, t)
        np.testing.assert_allclose(np.hypot(normal[:, 0], normal[:, 1]), 1.0, atol=1e-14)
        points = curve_point(curve, t)
        assert not curve.contains(points + 1e-2 * normal).any()
        assert curve.contains(points - 1e-2 * normal).all()

    @given(parameters)
    @settings(max_examples=50, deadline=None)
    def test_periodic(self, t):
        for curve in CURVES:
            np.testing.assert_allclose(curve.point(t + 2 * math.pi), curve.point(t), atol=1e-12)

    @given(parameters)
    @settings(max_examples=50, deadline=None)
    def test_symmetric_about_horizontal_axis(self, t):
        for kind in ('kite', 'peanut', 'pear'):
            curve = BoundaryCurve(kind)
            upper, lower = curve.point(t), curve.point(-t)
            np.testing.assert_allclose(lower, [upper[0], -upper[1]], atol=1e-12)

    def test_contains_and_distance(self):
        circle = BoundaryCurve('circle', radius=2.0)
        assert circle.contains([[0.0, 0.0]])[0]
        assert not circle.contains([[2.1, 0.0]])[0]
        assert circle.distance_to([[0.0, 0.0]])[0] == pytest.approx(2.0, abs=1e-5)
        assert circle.distance_to([[3.0, 0.0]])[0] == pytest.approx(1.0, abs=1e-5)

    def test_shifted(self):
        curve = BoundaryCurve('kite').shifted((1.0, -1.0))
        np.testing.assert_allclose(curve.point(0.0), [2.0, -1.0], atol=1e-15)

    @pytest.mark.parametrize("kwargs", [
        {'kind': 'ellipse'},
        {'kind': 'circle', 'radius': 0.0},
        {'kind': 'circle', 'radius': -1.0},
        {'kind': 'kite', 'center': (float('nan'), 0.0)},
    ])
    def test_rejects_bad_curves(self, kwargs):
        with pytest.raises(GeometryError):
            BoundaryCurve(**kwargs)

    def test_rejects_bad_condition(self):
        with pytest.raises(GeometryError):
            Scatterer(BoundaryCurve('kite'), 'robin')


class TestScene:
    def test_disjoint_scene(self):
        scene = Scene((Scatterer(BoundaryCurve('peanut')), Scatterer(BoundaryCurve('kite', (6.0, 0.0)))))
        assert len(scene) == 2
        assert scene.is_exterior((12.0, 12.0))
        assert not scene.is_exterior((0.0, 0.0))
        assert scene.inside_any([[6.0, 0.0], [20.0, 0.0]]).tolist() == [True, False]

    def test_overlapping_rejected(self):
        with pytest.raises(GeometryError, match="intersect"):
            Scene((Scatterer(BoundaryCurve('circle', (0.0, 0.0), 1.0)),
                   Scatterer(BoundaryCurve('circle', (1.5, 0.0), 1.0))))

    def test_nested_rejected(self):
        with pytest.raises(GeometryError, match="nested"):
            Scene((Scatterer(BoundaryCurve('circle', (0.0, 0.0), 3.0)),
                   Scatterer(BoundaryCurve('circle', (0.0, 0.0), 1.0))))

    def test_reference_must_be_exterior(self):
        with pytest.raises(GeometryError):
            Scene((Scatterer(BoundaryCurve('kite')),), PointScatterer((0.0, 0.0), 1.0))

    def test_empty_scene(self):
        scene = Scene()
        assert scene.is_exterior((0.0, 0.0))
        assert np.isinf(scene.distance_to([[0.0, 0.0]])[0])

    def test_shifted_scene(self):
        scene = Scene((Scatterer(BoundaryCurve('kite'), 'neumann'),)).shifted((2.0, 3.0))
        assert scene.scatterers[0].curve.center == (2.0, 3.0)
        assert scene.scatterers[0].condition == 'neumann'


class TestQuadratureNodes:
    def test_even_nodes(self):
        np.testing.assert_allclose(quadrature_nodes(4), [0.0, math.pi / 2, math.pi, 3 * math.pi / 2])
        assert len(quadrature_nodes(256)) == 256

    @pytest.mark.parametrize("M", [3, 2, 0, -4, 7, 4.0, True])
    def test_rejects_bad_counts(self, M):
        with pytest.raises(GeometryError):
            quadrature_nodes(M)
