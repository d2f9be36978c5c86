#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Seeded noise for phaseless measurements

One uniform(-1, 1) draw per entry, row-major, from a fresh PCG64 stream per
matrix seeded with seed + index:
    relative  entry * (1 + delta * e)
    absolute  max(0, entry + delta * e)
"""

from dataclasses import dataclass
from typing import Optional
import logging
import math

import numpy as np

from core.errors import ConfigError, DiagnosticsTracker
from core.models import PhaselessMatrix

activity_logger = logging.getLogger('activity')

NOISE_MODELS = ('relative', 'absolute', 'none')
_MAX_SEED = 2 ** 64


@dataclass(frozen=True)
class NoiseSpec:
    model: str = 'relative'
    level: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.model not in NOISE_MODELS:
            raise ConfigError(f"unknown noise model {self.model!r}; expected one of {NOISE_MODELS}")
        level = float(self.level)
        if not (level >= 0 and math.isfinite(level)):
            raise ConfigError(f"noise level must be a nonnegative number, got {self.level}")
        if self.model == 'relative' and level > 1:
            raise ConfigError(f"relative noise level must not exceed 1, got {level}")
        if isinstance(self.seed, bool) or int(self.seed) != self.seed or not 0 <= self.seed < _MAX_SEED:
            raise ConfigError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}")
        object.__setattr__(self, 'level', level)
        object.__setattr__(self, 'seed', int(self.seed))


def noise_draws(spec: NoiseSpec, shape, index: int = 0) -> np.ndarray:
    """Uniform(-1, 1) draws of the stream belonging to matrix number `index`"""
    generator = np.random.Generator(np.random.PCG64((spec.seed + index) % _MAX_SEED))
    return generator.uniform(-1.0, 1.0, size=shape)


def add_relative_noise(m: PhaselessMatrix, spec: NoiseSpec, index: int = 0) -> PhaselessMatrix:
    """entry * (1 + delta * e), so every output lies within [(1-delta) entry, (1+delta) entry]"""
    if spec.model != 'relative':
        raise ConfigError(f"expected a relative noise spec, got {spec.model!r}")
    if spec.level == 0.0:
        return m.with_entries(m.entries.copy())
    draws = noise_draws(spec, m.entries.shape, index)
    return m.with_entries(m.entries * (1.0 + spec.level * draws))


def add_absolute_noise(m: PhaselessMatrix, spec: NoiseSpec, index: int = 0,
                       tracker: Optional[DiagnosticsTracker] = None) -> PhaselessMatrix:
    """max(0, entry + delta * e)"""
    if spec.model != 'absolute':
        raise ConfigError(f"expected an absolute noise spec, got {spec.model!r}")
    if spec.level == 0.0:
        return m.with_entries(m.entries.copy())
    shifted = m.entries + spec.level * noise_draws(spec, m.entries.shape, index)
    clamped = int(np.count_nonzero(shifted < 0))
    if clamped and tracker is not None:
        tracker.record('clamped_noise', 'noise', f"{clamped} entries clamped at zero", count=clamped)
    return m.with_entries(np.maximum(shifted, 0.0))


def add_noise(m: PhaselessMatrix, spec: NoiseSpec, index: int = 0,
              tracker: Optional[DiagnosticsTracker] = None) -> PhaselessMatrix:
    """Dispatch on the noise model; 'none' returns the data unchanged"""
    if spec.model == 'relative':
        noisy = add_relative_noise(m, spec, index)
    elif spec.model == 'absolute':
        noisy = add_absolute_noise(m, spec, index, tracker)
    else:
        return m
    activity_logger.info(f"Applied {spec.model} noise {spec.level:g} (seed {spec.seed} + {index})")
    return noisy
