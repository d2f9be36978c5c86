import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from core.errors import ConfigError, DiagnosticsTracker
from core.models import PhaselessMatrix
from noise import NoiseSpec, add_absolute_noise, add_noise, add_relative_noise, noise_draws

K = 8.0


def moduli(N: int = 16, seed: int = 0, low: float = 0.0) -> PhaselessMatrix:
    rng = np.random.default_rng(seed)
    return PhaselessMatrix(rng.uniform(low, 2.0, (N, N)), K, 'additive', 1j, (12.0, 12.0))


class TestNoiseSpec:
    @pytest.mark.parametrize("kwargs", [
        {'model': 'gaussian'},
        {'level': -0.1},
        {'level': float('inf')},
        {'model': 'relative', 'level': 1.5},
        {'seed': -1},
        {'seed': 2 ** 64},
        {'seed': 1.5},
        {'seed': True},
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ConfigError):
            NoiseSpec(**kwargs)

    def test_absolute_levels_above_one_are_allowed(self):
        assert NoiseSpec('absolute', 2.5).level == 2.5

    def test_draws_are_seeded_per_index(self):
        spec = NoiseSpec('relative', 0.1, seed=42)
        first = noise_draws(spec, (4, 4), 0)
        assert np.array_equal(first, noise_draws(spec, (4, 4), 0))
        assert not np.array_equal(first, noise_draws(spec, (4, 4), 1))
        assert np.all(np.abs(first) < 1.0)

    def test_draws_near_the_top_of_the_seed_range(self):
        spec = NoiseSpec('relative', 0.1, seed=2 ** 64 - 1)
        assert noise_draws(spec, (2,), 3).shape == (2,)


class TestRelativeNoise:
    def test_zero_level_is_identity(self):
        m = moduli()
        noisy = add_relative_noise(m, NoiseSpec('relative', 0.0, seed=5))
        assert np.array_equal(noisy.entries, m.entries)
        assert noisy.tau == m.tau and noisy.z0 == m.z0 and noisy.model == m.model

    def test_same_seed_same_output(self):
        m = moduli()
        spec = NoiseSpec('relative', 0.1, seed=9)
        assert np.array_equal(add_relative_noise(m, spec).entries, add_relative_noise(m, spec).entries)

    @given(st.floats(min_value=0.0, max_value=1.0), st.integers(min_value=0, max_value=2 ** 32))
    @settings(max_examples=40, deadline=None)
    def test_bounds(self, level, seed):
        m = moduli(8)
        noisy = add_relative_noise(m, NoiseSpec('relative', level, seed)).entries
        assert np.all(noisy >= m.entries * (1 - level) - 1e-15)
        assert np.all(noisy <= m.entries * (1 + level) + 1e-15)

    def test_million_entries(self):
        m = moduli(1000, seed=1)
        spec = NoiseSpec('relative', 0.3, seed=123)
        noisy = add_relative_noise(m, spec).entries
        assert np.all(noisy >= 0.7 * m.entries * (1 - 1e-15))
        assert np.all(noisy <= 1.3 * m.entries * (1 + 1e-15))
        assert np.array_equal(noisy, add_relative_noise(m, spec).entries)

    def test_wrong_model(self):
        with pytest.raises(ConfigError):
            add_relative_noise(moduli(), NoiseSpec('absolute', 0.1))


class TestAbsoluteNoise:
    def test_zero_level_is_identity(self):
        m = moduli()
        assert np.array_equal(add_absolute_noise(m, NoiseSpec('absolute', 0.0)).entries, m.entries)

    def test_zero_entries_clamp(self):
        m = PhaselessMatrix(np.zeros((8, 8)), K, 'obstacle-only')
        spec = NoiseSpec('absolute', 0.5, seed=3)
        tracker = DiagnosticsTracker()
        noisy = add_absolute_noise(m, spec, tracker=tracker).entries
        draws = noise_draws(spec, (8, 8))
        assert np.all(noisy[draws < 0] == 0.0)
        np.testing.assert_allclose(noisy[draws >= 0], 0.5 * draws[draws >= 0])
        assert tracker.count('clamped_noise') == int(np.count_nonzero(draws < 0))

    def test_million_entries(self):
        m = moduli(1000, seed=2)
        spec = NoiseSpec('absolute', 0.3, seed=77)
        noisy = add_absolute_noise(m, spec).entries
        assert np.all(noisy >= 0.0)
        unclamped = noisy > 0
        assert np.all(np.abs(noisy[unclamped] - m.entries[unclamped]) <= 0.3)
        assert np.array_equal(noisy, add_absolute_noise(m, spec).entries)


class TestDispatch:
    def test_none_returns_input(self):
        m = moduli()
        assert add_noise(m, NoiseSpec('none', 0.5)) is m

    def test_dispatches_by_model(self):
        m = moduli()
        relative = NoiseSpec('relative', 0.2, seed=4)
        absolute = NoiseSpec('absolute', 0.2, seed=4)
        assert np.array_equal(add_noise(m, relative, 2).entries, add_relative_noise(m, relative, 2).entries)
        assert np.array_equal(add_noise(m, absolute, 2).entries, add_absolute_noise(m, absolute, 2).entries)
