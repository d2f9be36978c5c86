import math

import numpy as np
import pytest

from core.errors import DomainError
from core.models import DirectionGrid
from scattering.forward import point_phase_matrix
from scattering.mie import mie_coefficients, mie_far_field_circle, mie_order, mie_scattered_field


class TestCoefficients:
    def test_truncation_order(self):
        assert mie_order(2.0, 8.0) == 56
        assert mie_order(0.05, 8.0) == 41
        assert len(mie_coefficients(2.0, 'dirichlet', 8.0)) == 57

    def test_rejects_bad_input(self):
        with pytest.raises(DomainError):
            mie_coefficients(1.0, 'robin', 8.0)
        with pytest.raises(DomainError):
            mie_coefficients(0.0, 'dirichlet', 8.0)
        with pytest.raises(DomainError):
            mie_coefficients(1.0, 'neumann', -1.0)

    def test_coefficients_decay(self):
        c = mie_coefficients(1.0, 'neumann', 5.0)
        assert abs(c[-1]) < 1e-30


class TestFarField:
    def test_translation_factor(self):
        grid = DirectionGrid(32)
        centered = mie_far_field_circle(0.5, (0.0, 0.0), 'neumann', 8.0, grid).entries
        moved = mie_far_field_circle(0.5, (3.0, -2.0), 'neumann', 8.0, grid).entries
        np.testing.assert_allclose(moved, centered * point_phase_matrix((3.0, -2.0), 8.0, grid), rtol=1e-13)

    def test_small_soft_disk_is_nearly_isotropic(self):
        grid = DirectionGrid(64)
        column = np.abs(mie_far_field_circle(0.01 / 8.0, (0.0, 0.0), 'dirichlet', 8.0, grid).entries[:, 0])
        assert column.max() / column.min() - 1.0 <= 1e-2

    def test_small_hard_disk_is_much_weaker(self):
        grid = DirectionGrid(64)
        soft = np.abs(mie_far_field_circle(0.01 / 8.0, (0.0, 0.0), 'dirichlet', 8.0, grid).entries)
        hard = np.abs(mie_far_field_circle(0.01 / 8.0, (0.0, 0.0), 'neumann', 8.0, grid).entries)
        assert hard.max() / soft.min() <= 1e-2

    def test_depends_only_on_angle_difference(self):
        grid = DirectionGrid(16)
        U = mie_far_field_circle(1.0, (0.0, 0.0), 'dirichlet', 4.0, grid).entries
        np.testing.assert_allclose(np.roll(np.roll(U, 3, axis=0), 3, axis=1), U, atol=1e-13)


class TestNearField:
    @pytest.mark.parametrize("condition", ['dirichlet', 'neumann'])
    def test_boundary_condition(self, condition):
        k, a = 6.0, 1.0
        angles = np.linspace(0.0, 2 * math.pi, 11, endpoint=False)
        unit = np.column_stack((np.cos(angles), np.sin(angles)))
        direction = (math.cos(0.4), math.sin(0.4))
        r = a * (1.0 + 1e-9)
        scattered = mie_scattered_field(a, (0.0, 0.0), condition, k, direction, r * unit)
        incident = np.exp(1j * k * r * unit @ np.array(direction))
        if condition == 'dirichlet':
            np.testing.assert_allclose(incident + scattered, 0.0, atol=1e-7)
        else:
            h = 1e-5
            outer = mie_scattered_field(a, (0.0, 0.0), condition, k, direction, (r + h) * unit)
            outer_incident = np.exp(1j * k * (r + h) * unit @ np.array(direction))
            radial = (outer + outer_incident - scattered - incident) / h
            assert np.max(np.abs(radial)) <= 1e-3 * k

    def test_rejects_interior_points(self):
        with pytest.raises(DomainError):
            mie_scattered_field(1.0, (2.0, 2.0), 'dirichlet', 4.0, (1.0, 0.0), [[2.5, 2.0]])

    def test_translation(self):
        k = 4.0
        h = np.array([1.0, 2.0])
        direction = (0.6, 0.8)
        points = np.array([[3.0, 0.0], [-1.0, 4.0]])
        centered = mie_scattered_field(0.5, (0.0, 0.0), 'dirichlet', k, direction, points - h)
        moved = mie_scattered_field(0.5, tuple(h), 'dirichlet', k, direction, points)
        np.testing.assert_allclose(moved, np.exp(1j * k * h @ np.array(direction)) * centered, rtol=1e-12)
