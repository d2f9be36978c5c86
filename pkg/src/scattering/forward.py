#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Forward Scattering - phased far-field synthesis

Obstacles are represented by the combined-layer potential u^s = (K - i*eta*S) psi
with eta = k on every curve; the density solves one block-dense Nystrom system
(logarithmic splitting on the 2*pi-periodic parameterization, trapezoidal rule
for the smooth cross-curve blocks):
    sound-soft rows  (I/2 + K - i*eta*S) psi = -u^i
    sound-hard rows  (T - i*eta*(K' - I/2)) psi = -du^i/dnu
with the hypersingular T written in Maue form d/ds S d/ds + k^2 nu.S(nu .).
Rows are scaled by 2 throughout. Far fields use u^s ~ e^{i pi/4}/sqrt(8 pi k)
e^{ikr}/sqrt(r) u^inf, so Phi(., y) has far field e^{-ik x.y}.
"""

from dataclasses import dataclass
from functools import lru_cache
from threading import Lock
from typing import List, Optional, Sequence, Tuple, Union
import logging
import math
import time

import numpy as np
from cachetools import LRUCache, cached
from scipy.linalg import lu_factor, lu_solve

from config.solver_config import (
    COUPLING_DENOMINATOR_FLOOR,
    COUPLING_ETA_PER_WAVENUMBER,
    DEFAULT_NODES,
    EULER_GAMMA,
    MAX_CONDITION_NUMBER,
    MIN_SOLVER_NODES,
    RESIDUAL_TOLERANCE,
    SOLVER_CACHE_SIZE,
)
from core.errors import CouplingError, DiagnosticsTracker, GeometryError, SolverError
from core.models import DirectionGrid, FarFieldMatrix, PointScatterer, as_point
from scattering.geometry import Scatterer, Scene, quadrature_nodes
from scattering.specfun import bessel_jy01

activity_logger = logging.getLogger('activity')
error_logger = logging.getLogger('errors')


@dataclass(frozen=True)
class PlaneWave:
    """Incident field exp(ik x.d)"""
    direction: Tuple[float, float]


@dataclass(frozen=True)
class PointSource:
    """Incident field Phi(x, y) = (i/4) H0(k|x - y|)"""
    location: Tuple[float, float]


@dataclass(frozen=True, eq=False)
class BoundaryDensity:
    """Nodal values of the combined-layer density on one curve"""
    scatterer: Scatterer
    values: np.ndarray
    eta: float

    @property
    def curve(self):
        return self.scatterer.curve

    @property
    def M(self) -> int:
        return len(self.values)


# ---------------------------------------------------------------------------
# Quadrature building blocks
# ---------------------------------------------------------------------------
@lru_cache(maxsize=16)
def _log_weights(n: int) -> np.ndarray:
    """Weights R_|i-j| for the integral of ln(4 sin^2((t - tau)/2)) f(tau) on 2n nodes"""
    m = np.arange(2 * n)
    orders = np.arange(1, n)
    values = -(2.0 * math.pi / n) * np.sum(np.cos(np.outer(m, orders) * math.pi / n) / orders, axis=1)
    values -= (math.pi / n ** 2) * (-1.0) ** m
    weights = values[(m[:, None] - m[None, :]) % (2 * n)]
    weights.setflags(write=False)
    return weights


@lru_cache(maxsize=16)
def _differentiation_matrix(M: int) -> np.ndarray:
    """Trigonometric-interpolation derivative on M equispaced nodes (M even)"""
    index = np.arange(M)
    offset = index[:, None] - index[None, :]
    with np.errstate(divide='ignore', invalid='ignore'):
        matrix = 0.5 * (-1.0) ** offset / np.tan(offset * math.pi / M)
    np.fill_diagonal(matrix, 0.0)
    matrix.setflags(write=False)
    return matrix


class _CurveNodes:
    """Nystrom nodes of one curve: positions, derivatives, normals, speeds"""

    def __init__(self, scatterer: Scatterer, M: int):
        self.scatterer = scatterer
        self.M = M
        self.n = M // 2
        self.t = quadrature_nodes(M)
        self.x = scatterer.curve.point(self.t)
        self.d1, self.d2 = scatterer.curve.derivatives(self.t)
        self.speed = np.hypot(self.d1[:, 0], self.d1[:, 1])
        self.normal = np.column_stack((self.d1[:, 1], -self.d1[:, 0])) / self.speed[:, None]
        self.weight = math.pi / self.n
        # diagonal limit of the double-layer kernels
        self.curvature_term = (self.d1[:, 1] * self.d2[:, 0] - self.d1[:, 0] * self.d2[:, 1]) / (
            2.0 * math.pi * self.speed ** 2)
        self.margin = float(np.max(self.speed)) * 2.0 * math.pi / M

    @property
    def condition(self) -> str:
        return self.scatterer.condition


class _KernelBlock:
    """Kernel values between target and source nodes, shared by all operators of a block"""

    def __init__(self, k: float, target: _CurveNodes, source: _CurveNodes):
        self.k = k
        self.target = target
        self.source = source
        self.same = target is source
        diff = target.x[:, None, :] - source.x[None, :, :]
        self.dx, self.dy = diff[..., 0], diff[..., 1]
        r = np.hypot(self.dx, self.dy)
        if self.same:
            np.fill_diagonal(r, 1.0)
        j0, j1, y0, y1 = bessel_jy01(k * r)
        self.h0 = j0 + 1j * y0
        self.h1_over_r = (j1 + 1j * y1) / r
        if self.same:
            self.j0 = j0
            self.j1_over_r = j1 / r
            gap = target.t[:, None] - source.t[None, :]
            with np.errstate(divide='ignore'):
                self.log_term = np.log(4.0 * np.sin(0.5 * gap) ** 2)
            np.fill_diagonal(self.log_term, 0.0)
            self.log_weights = _log_weights(target.n)

    def single_layer(self, w: np.ndarray) -> np.ndarray:
        """Quadrature matrix of 2 * integral Phi(x_i, y(tau)) w(i, tau) psi(tau) dtau"""
        kernel = 0.5j * self.h0 * w
        if not self.same:
            return self.source.weight * kernel
        diag_w = np.diag(w).copy()
        m1 = -self.j0 * w / (2.0 * math.pi)
        np.fill_diagonal(m1, -diag_w / (2.0 * math.pi))
        m2 = kernel - m1 * self.log_term
        np.fill_diagonal(m2, (0.5j - EULER_GAMMA / math.pi
                              - np.log(0.5 * self.k * self.target.speed) / math.pi) * diag_w)
        return self.log_weights * m1 + self.source.weight * m2

    def double_layer_type(self, g: np.ndarray) -> np.ndarray:
        """Quadrature matrix of 2 * integral (ik/4) H1(kr)/r g(i, tau) psi(tau) dtau, g = O(|t - tau|^2)"""
        kernel = 0.5j * self.k * self.h1_over_r * g
        if not self.same:
            return self.source.weight * kernel
        b1 = -self.k * g * self.j1_over_r / (2.0 * math.pi)
        np.fill_diagonal(b1, 0.0)
        b2 = kernel - b1 * self.log_term
        np.fill_diagonal(b2, self.target.curvature_term)
        return self.log_weights * b1 + self.source.weight * b2

    def double_layer(self) -> np.ndarray:
        """2K: normal derivative at the source point"""
        g = self.source.d1[None, :, 1] * self.dx - self.source.d1[None, :, 0] * self.dy
        return self.double_layer_type(g)

    def adjoint_double_layer(self) -> np.ndarray:
        """2K': normal derivative at the target point"""
        nu = self.target.normal
        g = -(nu[:, None, 0] * self.dx + nu[:, None, 1] * self.dy) * self.source.speed[None, :]
        return self.double_layer_type(g)

    def hypersingular(self) -> np.ndarray:
        """2T in Maue form"""
        unweighted = self.single_layer(np.ones_like(self.dx))
        tangential = (_differentiation_matrix(self.target.M) @ unweighted
                      @ _differentiation_matrix(self.source.M)) / self.target.speed[:, None]
        normals = self.target.normal @ self.source.normal.T
        return tangential + self.k ** 2 * self.single_layer(normals * self.source.speed[None, :])


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------
class NystromSolver:
    """Factorized combined-field system for one set of scatterers at one wavenumber"""

    def __init__(self, scatterers: Sequence[Scatterer], k: float, nodes: int = DEFAULT_NODES,
                 eta: Optional[float] = None):
        """
        Assemble and factorize the block system

        Args:
            scatterers: Disjoint scatterers (at least one)
            k: Wavenumber
            nodes: Nystrom nodes per curve (even, >= MIN_SOLVER_NODES)
            eta: Coupling parameter of the combined layer (default: k)
        """
        if not scatterers:
            raise GeometryError("solver needs at least one scatterer")
        if not (k > 0 and math.isfinite(k)):
            raise SolverError(f"wavenumber must be positive, got {k}")
        if isinstance(nodes, bool) or not isinstance(nodes, (int, np.integer)) \
                or nodes % 2 or nodes < MIN_SOLVER_NODES:
            raise GeometryError(f"nodes per curve must be even and >= {MIN_SOLVER_NODES}, got {nodes}")

        self.k = float(k)
        self.nodes = int(nodes)
        self.eta = float(eta) if eta is not None else COUPLING_ETA_PER_WAVENUMBER * self.k
        self.curves = [_CurveNodes(s, self.nodes) for s in scatterers]
        self.offsets = np.cumsum([0] + [c.M for c in self.curves])

        started = time.perf_counter()
        self.matrix = self._assemble()
        self.condition = float(np.linalg.cond(self.matrix))
        if not math.isfinite(self.condition) or self.condition > MAX_CONDITION_NUMBER:
            error_logger.error(f"Near-singular Nystrom system: condition {self.condition:.3e}")
            raise SolverError(f"near-singular system (condition estimate {self.condition:.3e})",
                              condition=self.condition)
        self.lu = lu_factor(self.matrix)
        activity_logger.info(
            f"Assembled {len(self.curves)} curve(s) x {self.nodes} nodes at k={self.k}: "
            f"condition {self.condition:.3e}, {time.perf_counter() - started:.2f}s"
        )

    @property
    def size(self) -> int:
        return int(self.offsets[-1])

    def _assemble(self) -> np.ndarray:
        size = self.offsets[-1]
        matrix = np.zeros((size, size), dtype=complex)
        for p, target in enumerate(self.curves):
            rows = slice(self.offsets[p], self.offsets[p + 1])
            for q, source in enumerate(self.curves):
                cols = slice(self.offsets[q], self.offsets[q + 1])
                block = _KernelBlock(self.k, target, source)
                source_speed = np.broadcast_to(source.speed[None, :], block.dx.shape)
                if target.condition == 'dirichlet':
                    entries = block.double_layer() - 1j * self.eta * block.single_layer(source_speed)
                    if p == q:
                        entries += np.eye(target.M)
                else:
                    entries = block.hypersingular() - 1j * self.eta * block.adjoint_double_layer()
                    if p == q:
                        entries += 1j * self.eta * np.eye(target.M)
                matrix[rows, cols] = entries
        return matrix

    # -- right-hand sides ---------------------------------------------------
    def plane_wave_rhs(self, directions: np.ndarray) -> np.ndarray:
        """Columns -2 u^i (sound-soft rows) or -2 du^i/dnu (sound-hard rows), one per direction"""
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        blocks = []
        for curve in self.curves:
            incident = np.exp(1j * self.k * (curve.x @ directions.T))
            if curve.condition == 'dirichlet':
                blocks.append(-2.0 * incident)
            else:
                blocks.append(-2.0j * self.k * (curve.normal @ directions.T) * incident)
        return np.vstack(blocks)

    def point_source_rhs(self, location) -> np.ndarray:
        """Right-hand side for the incident field Phi(., y)"""
        y = np.asarray(as_point(location))
        blocks = []
        for curve in self.curves:
            diff = curve.x - y
            r = np.hypot(diff[:, 0], diff[:, 1])
            if np.min(r) == 0.0:
                raise GeometryError(f"point source {tuple(y)} lies on a boundary")
            j0, j1, y0, y1 = bessel_jy01(self.k * r)
            if curve.condition == 'dirichlet':
                blocks.append(-0.5j * (j0 + 1j * y0))
            else:
                along_normal = np.sum(curve.normal * diff, axis=1) / r
                blocks.append(0.5j * self.k * (j1 + 1j * y1) * along_normal)
        return np.concatenate(blocks)

    # -- solves -------------------------------------------------------------
    def solve(self, rhs: np.ndarray, tracker: Optional[DiagnosticsTracker] = None) -> np.ndarray:
        """Solve for one right-hand side (vector) or many (columns) in a single LU back-substitution"""
        rhs = np.asarray(rhs, dtype=complex)
        single = rhs.ndim == 1
        columns = rhs.reshape(self.size, -1)
        started = time.perf_counter()
        solution = lu_solve(self.lu, columns)
        if not single:
            activity_logger.info(f"Solved {columns.shape[1]} right-hand sides in {time.perf_counter() - started:.2f}s")
        self._check_residual(columns, solution, tracker)
        return solution[:, 0] if single else solution

    def _check_residual(self, rhs: np.ndarray, solution: np.ndarray,
                        tracker: Optional[DiagnosticsTracker]):
        scale = np.linalg.norm(rhs, axis=0)
        scale[scale == 0.0] = 1.0
        residual = float(np.max(np.linalg.norm(self.matrix @ solution - rhs, axis=0) / scale))
        if residual > RESIDUAL_TOLERANCE:
            message = f"relative residual {residual:.3e} exceeds {RESIDUAL_TOLERANCE:.0e}"
            if tracker is not None:
                tracker.record('residual', 'nystrom', message)
            else:
                error_logger.warning(message)

    def densities(self, solution: np.ndarray) -> List[BoundaryDensity]:
        """Split a solution vector into per-curve densities"""
        return [
            BoundaryDensity(curve.scatterer, np.array(solution[self.offsets[i]:self.offsets[i + 1]]), self.eta)
            for i, curve in enumerate(self.curves)
        ]

    # -- evaluation ---------------------------------------------------------
    def far_field_operator(self, directions: np.ndarray) -> np.ndarray:
        """Rows map densities to u^inf(x_hat) = int (-ik nu.x_hat - i eta) e^{-ik x_hat.y} psi ds"""
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        return np.hstack([
            _far_field_block(self.k, self.eta, curve, directions) for curve in self.curves
        ])

    def evaluate(self, points, solution: np.ndarray) -> np.ndarray:
        """Scattered field at exterior points; rows = points, columns follow the solution"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        values = None
        for i, curve in enumerate(self.curves):
            part = _potential_block(self.k, self.eta, curve, pts) @ solution[self.offsets[i]:self.offsets[i + 1]]
            values = part if values is None else values + part
        return values


def _far_field_block(k: float, eta: float, curve: _CurveNodes, directions: np.ndarray) -> np.ndarray:
    phase = np.exp(-1j * k * (directions @ curve.x.T))
    factor = (-1j * k * (directions @ curve.normal.T) - 1j * eta) * (curve.speed * curve.weight)[None, :]
    return factor * phase


def _potential_block(k: float, eta: float, curve: _CurveNodes, points: np.ndarray) -> np.ndarray:
    distance = curve.scatterer.curve.distance_to(points)
    inside = curve.scatterer.curve.contains(points)
    if np.any(inside) or np.any(distance < curve.margin):
        raise GeometryError(
            f"evaluation points must lie outside the curves at distance >= {curve.margin:.4f}")
    diff = points[:, None, :] - curve.x[None, :, :]
    r = np.hypot(diff[..., 0], diff[..., 1])
    j0, j1, y0, y1 = bessel_jy01(k * r)
    g = curve.d1[None, :, 1] * diff[..., 0] - curve.d1[None, :, 0] * diff[..., 1]
    kernel = 0.25j * k * (j1 + 1j * y1) / r * g + 0.25 * eta * (j0 + 1j * y0) * curve.speed[None, :]
    return curve.weight * kernel


_solver_lock = Lock()


@cached(cache=LRUCache(maxsize=SOLVER_CACHE_SIZE), lock=_solver_lock)
def get_solver(scatterers: Tuple[Scatterer, ...], k: float, nodes: int = DEFAULT_NODES) -> NystromSolver:
    """Factorized solver, cached by (scatterers, k, nodes)"""
    return NystromSolver(scatterers, k, nodes)


# ---------------------------------------------------------------------------
# Far fields
# ---------------------------------------------------------------------------
def point_phase_matrix(z0, k: float, grid: DirectionGrid) -> np.ndarray:
    """exp(ik z0.(theta_l - x_j)), row j = observation, column l = incidence"""
    projection = k * (grid.directions @ np.asarray(as_point(z0)))
    return np.exp(1j * (projection[None, :] - projection[:, None]))


def far_field_point(point: PointScatterer, k: float, grid: DirectionGrid) -> FarFieldMatrix:
    """Far field tau exp(ik z0.(theta - x)) of the reference point scatterer"""
    entries = point.tau * point_phase_matrix(point.z0, k, grid)
    return FarFieldMatrix(entries, k, 'point-only', point.tau, point.z0)


def solve_boundary_densities(scene: Scene, k: float, incident: Union[PlaneWave, PointSource],
                             M: int = DEFAULT_NODES) -> List[BoundaryDensity]:
    """Densities of the combined layer for a plane wave or a point-source incident field"""
    if not scene.scatterers:
        raise GeometryError("scene has no scatterers")
    solver = get_solver(scene.scatterers, float(k), M)
    if isinstance(incident, PlaneWave):
        direction = np.asarray(as_point(incident.direction))
        rhs = solver.plane_wave_rhs(direction / np.hypot(*direction))[:, 0]
    else:
        if not scene.is_exterior(incident.location):
            raise GeometryError(f"point source {incident.location} is not outside every curve")
        rhs = solver.point_source_rhs(incident.location)
    return solver.densities(solver.solve(rhs))


def _obstacle_far_field(solver: NystromSolver, grid: DirectionGrid,
                        tracker: Optional[DiagnosticsTracker]) -> Tuple[np.ndarray, np.ndarray]:
    directions = grid.directions
    densities = solver.solve(solver.plane_wave_rhs(directions), tracker)
    return solver.far_field_operator(directions) @ densities, densities


def far_field_obstacle(scene: Scene, k: float, grid: DirectionGrid, M: int = DEFAULT_NODES,
                       tracker: Optional[DiagnosticsTracker] = None) -> FarFieldMatrix:
    """Far-field matrix of the obstacles alone, one column per incidence direction"""
    if not scene.scatterers:
        return FarFieldMatrix(np.zeros((grid.N, grid.N), dtype=complex), k, 'obstacle-only')
    solver = get_solver(scene.scatterers, float(k), M)
    entries, _ = _obstacle_far_field(solver, grid, tracker)
    return FarFieldMatrix(entries, k, 'obstacle-only')


def scattered_field_at(scene: Scene, densities: Sequence[BoundaryDensity], x, k: float) -> complex:
    """Value of the combined-layer representation at an exterior point"""
    if not densities:
        return 0j
    point = np.asarray(as_point(x))[None, :]
    if not scene.is_exterior(point[0]):
        raise GeometryError(f"point {tuple(point[0])} is not outside every curve")
    total = 0j
    for density in densities:
        curve = _CurveNodes(density.scatterer, density.M)
        total += complex((_potential_block(float(k), density.eta, curve, point) @ density.values)[0])
    return total


class ReferenceCoupling:
    """
    Obstacle response to the plane waves and to the reference point, reused for any strength

    The point scatterer is excited by the total field at z0 without its own contribution:
        c = (u^i(z0) + P[psi1](z0)) / (1 - tau P[psi2](z0))
    where psi1 answers the plane wave and psi2 answers Phi(., z0).
    """

    def __init__(self, scene: Scene, z0, k: float, grid: DirectionGrid, M: int = DEFAULT_NODES,
                 tracker: Optional[DiagnosticsTracker] = None):
        self.scene = scene
        self.z0 = as_point(z0)
        self.k = float(k)
        self.grid = grid
        if not scene.is_exterior(self.z0):
            raise GeometryError(f"reference point {self.z0} is not outside every curve")

        self.phase = point_phase_matrix(self.z0, self.k, grid)
        N = grid.N
        if not scene.scatterers:
            self.obstacle = np.zeros((N, N), dtype=complex)
            self.point_response = np.zeros(N, dtype=complex)
            self.ratio = np.zeros(N, dtype=complex)
            self.self_response = 0j
            return

        solver = get_solver(scene.scatterers, self.k, M)
        self.obstacle, plane_densities = _obstacle_far_field(solver, grid, tracker)
        point_density = solver.solve(solver.point_source_rhs(self.z0), tracker=tracker)
        self.point_response = solver.far_field_operator(grid.directions) @ point_density
        incident_at_z0 = np.exp(1j * self.k * (grid.directions @ np.asarray(self.z0)))
        # P[psi1](z0) / u^i(z0); |u^i| = 1
        self.ratio = solver.evaluate(np.asarray(self.z0)[None, :], plane_densities)[0] / incident_at_z0
        self.self_response = complex(solver.evaluate(np.asarray(self.z0)[None, :], point_density)[0])

    def excitation(self, tau: complex) -> np.ndarray:
        """c / u^i(z0) per incidence"""
        denominator = 1.0 - complex(tau) * self.self_response
        if abs(denominator) < COUPLING_DENOMINATOR_FLOOR:
            raise CouplingError(f"resonant point-obstacle coupling: |1 - tau P| = {abs(denominator):.3e}")
        return (1.0 + self.ratio) / denominator

    def far_field(self, tau: complex, model: str = 'coupled') -> FarFieldMatrix:
        tau = complex(tau)
        if model == 'additive':
            entries = self.obstacle + tau * self.phase
        elif model == 'coupled':
            gain = self.excitation(tau)
            incident = np.exp(1j * self.k * (self.grid.directions @ np.asarray(self.z0)))
            entries = (self.obstacle
                       + tau * (self.point_response[:, None] * (gain * incident)[None, :])
                       + tau * (self.phase * gain[None, :]))
        else:
            raise ValueError(f"unknown forward model {model!r}; expected 'additive' or 'coupled'")
        return FarFieldMatrix(entries, self.k, model, tau, self.z0)


def far_field_combined(scene: Scene, point: Optional[PointScatterer], k: float, grid: DirectionGrid,
                       M: int = DEFAULT_NODES, model: str = 'coupled') -> FarFieldMatrix:
    """Far field of obstacles plus reference point, additive or fully coupled"""
    point = point if point is not None else scene.reference
    if point is None:
        raise GeometryError("no reference point scatterer given")
    coupling = ReferenceCoupling(scene, point.z0, k, grid, M)
    return coupling.far_field(point.tau, model)
