#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Sampling indicators on rectangular grids

Phaseless data (reference point z0, w = z - z0):
    I_z0(z)    = |sum_j sum_l F_jl cos(k (x_j - theta_l).w)| (2pi/N)^2
    I_Theta(z) = |sum_{theta in Theta} sum_j F_j(theta) cos(k x_j.w)| (2pi/N)
Phased data:
    G(z, theta) = (2pi/N) sum_j U_j(theta) e^{ik x_j.z},   I3 = |G|
    A(z)        = (2pi/N)^2 sum_j sum_l e^{ik x_j.z} U_jl e^{-ik theta_l.z},   I2 = |A|
Every node is a pair of phase-vector products; grid rows are evaluated independently.
"""

from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Callable, Dict, Sequence, Tuple
import logging
import math
import time

import numpy as np
from tqdm import tqdm

from core.errors import IndicatorError
from core.models import (
    DirectionGrid,
    FarFieldMatrix,
    GridField,
    GridSpec,
    PhaselessMatrix,
    Point,
    as_point,
)

activity_logger = logging.getLogger('activity')

RowEvaluator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class FMatrix:
    """F = |u_{D+z0}|^2 - |u_D|^2 - |tau|^2, real"""
    entries: np.ndarray
    tau: complex
    z0: Point
    k: float

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=float)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise IndicatorError(f"F must be square, got shape {entries.shape}")
        if not np.all(np.isfinite(entries)):
            raise IndicatorError("F has non-finite entries")
        object.__setattr__(self, 'entries', entries)
        object.__setattr__(self, 'tau', complex(self.tau))
        object.__setattr__(self, 'z0', as_point(self.z0))
        object.__setattr__(self, 'k', float(self.k))

    @property
    def N(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class ThetaSet:
    """Finite set of incident directions taken from the direction grid"""
    directions: Tuple[Point, ...]

    def __post_init__(self):
        directions = tuple(as_point(d) for d in self.directions)
        if not directions:
            raise IndicatorError("Theta must contain at least one direction")
        object.__setattr__(self, 'directions', directions)

    def indices(self, grid: DirectionGrid) -> np.ndarray:
        return np.array([grid.index_of(d) for d in self.directions], dtype=int)


def f_matrix(combined: PhaselessMatrix, bare: PhaselessMatrix, tau: complex) -> FMatrix:
    """Entrywise combined^2 - bare^2 - |tau|^2"""
    tau = complex(tau)
    if combined.N != bare.N:
        raise IndicatorError(f"matrix sizes differ: {combined.N} vs {bare.N}")
    if not math.isclose(combined.k, bare.k, rel_tol=1e-12):
        raise IndicatorError(f"wavenumbers differ: {combined.k} vs {bare.k}")
    if combined.z0 is None:
        raise IndicatorError("combined measurement carries no reference point")
    if bare.z0 is not None and bare.z0 != combined.z0:
        raise IndicatorError(f"reference points differ: {combined.z0} vs {bare.z0}")
    if combined.tau is not None and combined.tau != tau:
        raise IndicatorError(f"combined measurement used tau={combined.tau}, not {tau}")
    entries = combined.entries ** 2 - bare.entries ** 2 - abs(tau) ** 2
    return FMatrix(entries, tau, combined.z0, combined.k)


def _phases(points: np.ndarray, directions: np.ndarray, k: float) -> np.ndarray:
    """e^{ik d.p}, rows = points, columns = directions"""
    return np.exp(1j * k * (points @ directions.T))


def _sweep(spec: GridSpec, evaluate_row: RowEvaluator, label: str, workers: int = 1,
           show_progress: bool = False) -> np.ndarray:
    """Evaluate a row evaluator over every grid row into a (rows, columns) array"""
    rows, columns = spec.shape
    x_axis, y_axis = spec.x_axis, spec.y_axis
    values = np.empty((rows, columns))

    def work(row: int):
        points = np.column_stack((x_axis, np.full(columns, y_axis[row])))
        return row, evaluate_row(points)

    started = time.perf_counter()
    with tqdm(total=rows, desc=label, unit='row', disable=not show_progress) as pbar:
        if workers > 1 and rows > 1:
            with ThreadPoolExecutor(max_workers=workers, thread_name_prefix='indicator') as executor:
                futures = [executor.submit(work, row) for row in range(rows)]
                for future in as_completed(futures):
                    row, row_values = future.result()
                    values[row] = row_values
                    pbar.update(1)
        else:
            for row in range(rows):
                values[row] = work(row)[1]
                pbar.update(1)
    activity_logger.info(f"{label}: {rows}x{columns} nodes in {time.perf_counter() - started:.2f}s")
    return values


def _provenance(kind: str, k: float, N: int, **extra) -> Dict[str, object]:
    provenance = {'indicator': kind, 'k': k, 'N': N}
    provenance.update({key: value for key, value in extra.items() if value is not None})
    return provenance


def indicator_iz0(F: FMatrix, spec: GridSpec, workers: int = 1, show_progress: bool = False) -> GridField:
    """Phaseless indicator I_z0 on the grid"""
    grid = DirectionGrid(F.N)
    directions = grid.directions
    center = np.asarray(F.z0)
    scale = grid.weight ** 2

    def evaluate_row(points: np.ndarray) -> np.ndarray:
        p = _phases(points - center, directions, F.k)
        return np.abs(scale * np.real(np.sum((p @ F.entries) * np.conj(p), axis=1)))

    values = _sweep(spec, evaluate_row, 'I_z0', workers, show_progress)
    return GridField(spec, values, _provenance('iz0', F.k, F.N, z0=F.z0, tau=F.tau))


def indicator_itheta(F: FMatrix, theta: ThetaSet, spec: GridSpec, workers: int = 1,
                     show_progress: bool = False) -> GridField:
    """Phaseless indicator I_Theta on the grid; Theta must lie on the direction grid"""
    grid = DirectionGrid(F.N)
    columns = theta.indices(grid)
    summed = F.entries[:, columns].sum(axis=1)
    directions = grid.directions
    center = np.asarray(F.z0)

    def evaluate_row(points: np.ndarray) -> np.ndarray:
        p = _phases(points - center, directions, F.k)
        return np.abs(grid.weight * np.real(p @ summed))

    values = _sweep(spec, evaluate_row, 'I_Theta', workers, show_progress)
    return GridField(spec, values, _provenance('itheta', F.k, F.N, z0=F.z0, tau=F.tau,
                                               theta=list(theta.directions)))


def auxiliary_g(U: FarFieldMatrix, z, incidence_index: int) -> complex:
    """G(z, theta_l) by the trapezoidal rule"""
    grid = U.grid
    p = _phases(np.asarray(as_point(z))[None, :], grid.directions, U.k)[0]
    return complex(grid.weight * (p @ U.entries[:, incidence_index]))


def indicator_i3(U: FarFieldMatrix, incidence, spec: GridSpec, workers: int = 1,
                 show_progress: bool = False) -> GridField:
    """|G(z, theta)| for one grid incidence direction"""
    grid = U.grid
    column = U.entries[:, grid.index_of(incidence)]
    directions = grid.directions

    def evaluate_row(points: np.ndarray) -> np.ndarray:
        return np.abs(grid.weight * (_phases(points, directions, U.k) @ column))

    values = _sweep(spec, evaluate_row, 'I3', workers, show_progress)
    return GridField(spec, values, _provenance('i3', U.k, U.N, incidence=as_point(incidence), model=U.model))


def indicator_i2(U: FarFieldMatrix, spec: GridSpec, workers: int = 1, show_progress: bool = False) -> GridField:
    """|A(z)| with A(z) = (2pi/N)^2 p(z)^T U conj(p(z))"""
    grid = U.grid
    directions = grid.directions
    scale = grid.weight ** 2

    def evaluate_row(points: np.ndarray) -> np.ndarray:
        p = _phases(points, directions, U.k)
        return np.abs(scale * np.sum((p @ U.entries) * np.conj(p), axis=1))

    values = _sweep(spec, evaluate_row, 'I2', workers, show_progress)
    return GridField(spec, values, _provenance('i2', U.k, U.N, model=U.model))


def combine_reference_fields(fields: Sequence[GridField]) -> GridField:
    """Pointwise minimum of max-normalized fields measured with different reference points"""
    if not fields:
        raise IndicatorError("no fields to combine")
    spec = fields[0].spec
    for field in fields[1:]:
        if field.spec != spec:
            raise IndicatorError("fields are sampled on different grids")

    normalized = []
    for field in fields:
        peak = float(np.max(field.values))
        normalized.append(field.values / peak if peak > 0 else field.values)
    combined = np.minimum.reduce(normalized)
    provenance = dict(fields[0].provenance)
    provenance['combined'] = len(fields)
    return GridField(spec, combined, provenance)
