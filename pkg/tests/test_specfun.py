import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings, strategies as st

from core.errors import DomainError
from scattering.specfun import (
    bessel_j,
    bessel_j_derivative,
    bessel_jy,
    bessel_jy01,
    bessel_y,
    hankel1,
    hankel1_derivative,
)

ARGUMENTS = np.array([0.01, 0.3, 0.999, 1.0, 2.5, 7.0, 13.3, 24.999, 25.0, 31.4, 100.0, 777.7, 4999.0])
ORDERS = [0, 1, 2, 5, 13, 40, 120, 200]


class TestAgainstReference:
    @pytest.mark.parametrize("order", ORDERS)
    def test_bessel_j(self, order):
        np.testing.assert_allclose(bessel_j(order, ARGUMENTS), sp.jv(order, ARGUMENTS), rtol=1e-10, atol=1e-12)

    @pytest.mark.parametrize("order", ORDERS)
    def test_bessel_y(self, order):
        reference = sp.yv(order, ARGUMENTS)
        representable = np.abs(reference) < 1e290
        assert representable.sum() >= 6
        np.testing.assert_allclose(bessel_y(order, ARGUMENTS)[representable], reference[representable],
                                   rtol=1e-10, atol=1e-11)

    @pytest.mark.parametrize("order", [0, 1, 3, 17])
    def test_hankel1(self, order):
        x = ARGUMENTS[1:]
        np.testing.assert_allclose(hankel1(order, x), sp.hankel1(order, x), rtol=1e-10, atol=1e-11)

    def test_j_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0
        assert bessel_j(3, 0.0) == 0.0

    def test_kernel_path_matches_reference(self):
        x = np.linspace(0.05, 60.0, 997).reshape(997, 1)
        j0, j1, y0, y1 = bessel_jy01(x)
        assert j0.shape == x.shape
        np.testing.assert_allclose(j0, sp.j0(x), atol=1e-13)
        np.testing.assert_allclose(j1, sp.j1(x), atol=1e-13)
        np.testing.assert_allclose(y0, sp.y0(x), rtol=1e-11, atol=1e-12)
        np.testing.assert_allclose(y1, sp.y1(x), rtol=1e-11, atol=1e-12)

    def test_continuous_across_crossovers(self):
        for edge in (1.0, 25.0):
            below, above = np.nextafter(edge, 0.0), edge
            for order in (0, 1):
                j_below, y_below = bessel_jy(order, below)
                j_above, y_above = bessel_jy(order, above)
                assert abs(j_below - j_above) < 1e-12
                assert abs(y_below - y_above) < 1e-12

    def test_derivatives(self):
        x = np.array([0.5, 3.0, 16.0, 40.0])
        for order in (0, 1, 4):
            np.testing.assert_allclose(bessel_j_derivative(order, x), sp.jvp(order, x), atol=1e-12)
            np.testing.assert_allclose(hankel1_derivative(order, x), sp.h1vp(order, x), rtol=1e-10, atol=1e-11)

    def test_scalar_in_scalar_out(self):
        j, y = bessel_jy(2, 3.0)
        assert isinstance(j, float) and isinstance(y, float)
        assert isinstance(hankel1(0, 1.0), complex)


class TestIdentities:
    @given(st.integers(min_value=0, max_value=40), st.floats(min_value=0.1, max_value=1000.0))
    @settings(max_examples=200, deadline=None)
    def test_wronskian(self, order, x):
        j0, y0 = bessel_jy(order, x)
        j1, y1 = bessel_jy(order + 1, x)
        assert j1 * y0 - j0 * y1 == pytest.approx(2.0 / (math.pi * x), rel=1e-10)

    def test_wronskian_on_a_dense_sweep(self):
        x = np.geomspace(0.1, 1000.0, 2001)
        for order in (0, 1, 7, 25):
            j0, y0 = bessel_jy(order, x)
            j1, y1 = bessel_jy(order + 1, x)
            np.testing.assert_allclose(j1 * y0 - j0 * y1, 2.0 / (math.pi * x), rtol=1e-10)

    @given(st.integers(min_value=1, max_value=30), st.floats(min_value=0.5, max_value=200.0))
    @settings(max_examples=60, deadline=None)
    def test_three_term_recurrence(self, order, x):
        lower, upper = bessel_j(order - 1, x), bessel_j(order + 1, x)
        assert lower + upper == pytest.approx(2.0 * order / x * bessel_j(order, x), abs=1e-11)


class TestDomain:
    @pytest.mark.parametrize("order", [-1, 201, 1.5, True])
    def test_bad_order(self, order):
        with pytest.raises(DomainError):
            bessel_j(order, 1.0)

    @pytest.mark.parametrize("x", [-0.1, 5000.5, float('nan'), float('inf')])
    def test_bad_argument(self, x):
        with pytest.raises(DomainError):
            bessel_j(0, x)

    def test_second_kind_rejects_zero(self):
        with pytest.raises(DomainError):
            bessel_y(0, 0.0)
        with pytest.raises(DomainError):
            bessel_jy01(np.array([1.0, 0.0]))
