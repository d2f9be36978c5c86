#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Shared data objects: direction grids, far-field matrices, point scatterers,
sampling grids and indicator fields
"""

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple
import math

import numpy as np

from core.errors import FormatError, IndicatorError

Point = Tuple[float, float]

FORWARD_MODELS = ('obstacle-only', 'point-only', 'additive', 'coupled', 'retrieved')
DIRECTION_TOLERANCE = 1e-9


def as_point(value) -> Point:
    """Coerce a 2-sequence to a float pair"""
    x, y = value
    return (float(x), float(y))


@dataclass(frozen=True)
class DirectionGrid:
    """N equispaced unit directions theta_m = 2*pi*m/N on the circle"""
    N: int

    def __post_init__(self):
        if isinstance(self.N, bool) or int(self.N) != self.N or self.N < 1:
            raise ValueError(f"direction count must be a positive integer, got {self.N!r}")
        object.__setattr__(self, 'N', int(self.N))

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.N) / self.N

    @property
    def directions(self) -> np.ndarray:
        angles = self.angles
        return np.column_stack((np.cos(angles), np.sin(angles)))

    @property
    def weight(self) -> float:
        """Trapezoidal weight 2*pi/N"""
        return 2.0 * math.pi / self.N

    def index_of(self, direction) -> int:
        """Grid index of a unit direction; raises IndicatorError when it is not on the grid"""
        d = np.asarray(direction, dtype=float)
        norm = float(np.hypot(d[0], d[1]))
        if norm == 0.0:
            raise IndicatorError("zero vector is not a direction")
        distances = np.hypot(*(self.directions - d / norm).T)
        index = int(np.argmin(distances))
        if distances[index] > DIRECTION_TOLERANCE * self.N:
            raise IndicatorError(f"direction {tuple(d)} is not on the {self.N}-direction grid")
        return index


@dataclass(frozen=True)
class PointScatterer:
    """Reference point scatterer at z0 with complex strength tau"""
    z0: Point
    tau: complex

    def __post_init__(self):
        object.__setattr__(self, 'z0', as_point(self.z0))
        object.__setattr__(self, 'tau', complex(self.tau))
        if not (math.isfinite(self.z0[0]) and math.isfinite(self.z0[1])
                and math.isfinite(self.tau.real) and math.isfinite(self.tau.imag)):
            raise ValueError("point scatterer must be finite")


def _check_metadata(k: float, model: str):
    if not (k > 0 and math.isfinite(k)):
        raise FormatError(f"wavenumber must be positive, got {k}")
    if model not in FORWARD_MODELS:
        raise FormatError(f"unknown model tag {model!r}")


@dataclass(frozen=True, eq=False)
class FarFieldMatrix:
    """
    Phased far field u(x_j, theta_l): row j = observation, column l = incidence
    """
    entries: np.ndarray
    k: float
    model: str
    tau: Optional[complex] = None
    z0: Optional[Point] = None

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise FormatError(f"far-field matrix must be square, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise FormatError("far-field matrix has non-finite entries")
        object.__setattr__(self, 'entries', entries)
        object.__setattr__(self, 'k', float(self.k))
        _check_metadata(self.k, self.model)
        if self.tau is not None:
            object.__setattr__(self, 'tau', complex(self.tau))
        if self.z0 is not None:
            object.__setattr__(self, 'z0', as_point(self.z0))

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    @property
    def grid(self) -> DirectionGrid:
        return DirectionGrid(self.N)

    def modulus(self) -> 'PhaselessMatrix':
        """The phaseless measurement |u|"""
        return PhaselessMatrix(np.abs(self.entries), self.k, self.model, self.tau, self.z0)


@dataclass(frozen=True, eq=False)
class PhaselessMatrix:
    """Moduli |u(x_j, theta_l)| with the metadata of the phased data"""
    entries: np.ndarray
    k: float
    model: str
    tau: Optional[complex] = None
    z0: Optional[Point] = None

    def __post_init__(self):
        entries = np.asarray(self.entries)
        if np.iscomplexobj(entries):
            raise FormatError("phaseless matrix must be real")
        entries = entries.astype(float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise FormatError(f"phaseless matrix must be square, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise FormatError("phaseless matrix has non-finite entries")
        if np.any(entries < 0):
            raise FormatError("phaseless matrix has negative entries")
        object.__setattr__(self, 'entries', entries)
        object.__setattr__(self, 'k', float(self.k))
        _check_metadata(self.k, self.model)
        if self.tau is not None:
            object.__setattr__(self, 'tau', complex(self.tau))
        if self.z0 is not None:
            object.__setattr__(self, 'z0', as_point(self.z0))

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def with_entries(self, entries: np.ndarray) -> 'PhaselessMatrix':
        return PhaselessMatrix(entries, self.k, self.model, self.tau, self.z0)


@dataclass(frozen=True)
class GridSpec:
    """Rectangular sampling region with uniform spacing"""
    x_min: float = -6.0
    x_max: float = 6.0
    y_min: float = -6.0
    y_max: float = 6.0
    spacing: float = 0.05

    def __post_init__(self):
        for name in ('x_min', 'x_max', 'y_min', 'y_max', 'spacing'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise IndicatorError(f"grid {name} must be finite")
            object.__setattr__(self, name, value)
        if self.spacing <= 0:
            raise IndicatorError("grid spacing must be positive")
        if self.x_max < self.x_min or self.y_max < self.y_min:
            raise IndicatorError("grid ranges must be increasing")

    @staticmethod
    def centered(center, half_width: float, spacing: float) -> 'GridSpec':
        cx, cy = as_point(center)
        return GridSpec(cx - half_width, cx + half_width, cy - half_width, cy + half_width, spacing)

    @property
    def shape(self) -> Tuple[int, int]:
        """(rows, columns) = (y nodes, x nodes)"""
        nx = int(math.floor((self.x_max - self.x_min) / self.spacing + 1e-9)) + 1
        ny = int(math.floor((self.y_max - self.y_min) / self.spacing + 1e-9)) + 1
        return ny, nx

    @property
    def x_axis(self) -> np.ndarray:
        return self.x_min + self.spacing * np.arange(self.shape[1])

    @property
    def y_axis(self) -> np.ndarray:
        return self.y_min + self.spacing * np.arange(self.shape[0])

    def nodes(self) -> np.ndarray:
        """All nodes, row-major (y outer, x inner), shape (rows*columns, 2)"""
        xx, yy = np.meshgrid(self.x_axis, self.y_axis)
        return np.column_stack((xx.ravel(), yy.ravel()))


@dataclass(frozen=True, eq=False)
class GridField:
    """One nonnegative indicator value per grid node; values[row, column] = value at (x[column], y[row])"""
    spec: GridSpec
    values: np.ndarray
    provenance: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.spec.shape:
            raise IndicatorError(f"grid values shape {values.shape} does not match {self.spec.shape}")
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise IndicatorError("grid values must be finite and nonnegative")
        object.__setattr__(self, 'values', values)

    def argmax_point(self) -> Point:
        row, column = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return (float(self.spec.x_axis[column]), float(self.spec.y_axis[row]))

    def value_at(self, point) -> float:
        """Value at the node nearest to a point"""
        x, y = as_point(point)
        column = int(np.argmin(np.abs(self.spec.x_axis - x)))
        row = int(np.argmin(np.abs(self.spec.y_axis - y)))
        return float(self.values[row, column])
