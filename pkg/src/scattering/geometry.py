#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Boundary curves of the reconstruction experiments, their derivatives and
normals, scenes of disjoint scatterers, and Nystrom quadrature nodes

All curves are 2*pi-periodic and traversed counterclockwise:
    kite    (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)
    peanut  2 sqrt(3 cos^2 t + 1) (cos t, sin t)
    pear    (2 + 0.3 cos 3t) (cos t, sin t)
    circle  r (cos t, sin t)
each shifted by its center (a, b). The outward normal is (x2', -x1') / |x'|.
"""

from dataclasses import dataclass
from typing import Optional, Tuple
import math

import numpy as np

from config.solver_config import MIN_QUADRATURE_NODES, POLYGON_SEGMENTS
from core.errors import GeometryError
from core.models import Point, PointScatterer, as_point

CURVE_KINDS = ('kite', 'peanut', 'pear', 'circle')
BOUNDARY_CONDITIONS = ('dirichlet', 'neumann')

_CHUNK = 256


def _radial_profile(kind: str, radius: float, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """rho(t), rho'(t), rho''(t) for curves of the form rho(t) (cos t, sin t)"""
    if kind == 'circle':
        rho = np.full_like(t, radius)
        return rho, np.zeros_like(t), np.zeros_like(t)
    if kind == 'pear':
        return 2.0 + 0.3 * np.cos(3 * t), -0.9 * np.sin(3 * t), -2.7 * np.cos(3 * t)
    # peanut: rho = 2 sqrt(s), s = 3 cos^2 t + 1
    s = 3.0 * np.cos(t) ** 2 + 1.0
    ds = -3.0 * np.sin(2 * t)
    dds = -6.0 * np.cos(2 * t)
    root = np.sqrt(s)
    return 2.0 * root, ds / root, dds / root - 0.5 * ds * ds / (s * root)


@dataclass(frozen=True)
class BoundaryCurve:
    """Parameterized closed curve; radius is used by circles only"""
    kind: str
    center: Point = (0.0, 0.0)
    radius: float = 1.0

    def __post_init__(self):
        if self.kind not in CURVE_KINDS:
            raise GeometryError(f"unknown curve kind {self.kind!r}; expected one of {CURVE_KINDS}")
        object.__setattr__(self, 'center', as_point(self.center))
        object.__setattr__(self, 'radius', float(self.radius))
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise GeometryError(f"radius must be positive, got {self.radius}")
        if not all(math.isfinite(c) for c in self.center):
            raise GeometryError("center must be finite")

    def point(self, t) -> np.ndarray:
        """x(t), shape (..., 2)"""
        t = np.asarray(t, dtype=float)
        if self.kind == 'kite':
            x1 = np.cos(t) + 0.65 * np.cos(2 * t) - 0.65
            x2 = 1.5 * np.sin(t)
        else:
            rho, _, _ = _radial_profile(self.kind, self.radius, t)
            x1, x2 = rho * np.cos(t), rho * np.sin(t)
        return np.stack((x1 + self.center[0], x2 + self.center[1]), axis=-1)

    def derivatives(self, t) -> Tuple[np.ndarray, np.ndarray]:
        """Exact x'(t) and x''(t), each shape (..., 2)"""
        t = np.asarray(t, dtype=float)
        cos_t, sin_t = np.cos(t), np.sin(t)
        if self.kind == 'kite':
            first = np.stack((-sin_t - 1.3 * np.sin(2 * t), 1.5 * cos_t), axis=-1)
            second = np.stack((-cos_t - 2.6 * np.cos(2 * t), -1.5 * sin_t), axis=-1)
            return first, second
        rho, d_rho, dd_rho = _radial_profile(self.kind, self.radius, t)
        first = np.stack((d_rho * cos_t - rho * sin_t, d_rho * sin_t + rho * cos_t), axis=-1)
        second = np.stack(
            (dd_rho * cos_t - 2 * d_rho * sin_t - rho * cos_t,
             dd_rho * sin_t + 2 * d_rho * cos_t - rho * sin_t),
            axis=-1,
        )
        return first, second

    def normal(self, t) -> np.ndarray:
        """Unit outward normal (x2', -x1') / |x'|"""
        first, _ = self.derivatives(t)
        speed = np.hypot(first[..., 0], first[..., 1])
        return np.stack((first[..., 1] / speed, -first[..., 0] / speed), axis=-1)

    def polygon(self, segments: int = POLYGON_SEGMENTS) -> np.ndarray:
        """Vertices of the inscribed polygon, shape (segments, 2)"""
        return self.point(2.0 * math.pi * np.arange(segments) / segments)

    def contains(self, points) -> np.ndarray:
        """Even-odd test against the polygonal approximation"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        vertices = self.polygon()
        start, end = vertices, np.roll(vertices, -1, axis=0)
        inside = np.zeros(len(pts), dtype=bool)
        for offset in range(0, len(pts), _CHUNK):
            px = pts[offset:offset + _CHUNK, 0:1]
            py = pts[offset:offset + _CHUNK, 1:2]
            straddles = (start[:, 1] > py) != (end[:, 1] > py)
            with np.errstate(divide='ignore', invalid='ignore'):
                crossing_x = start[:, 0] + (py - start[:, 1]) * (end[:, 0] - start[:, 0]) / (end[:, 1] - start[:, 1])
            crossings = straddles & (px < crossing_x)
            inside[offset:offset + _CHUNK] = np.count_nonzero(crossings, axis=1) % 2 == 1
        return inside

    def distance_to(self, points) -> np.ndarray:
        """Distance from points to the polygonal approximation of the curve"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        vertices = self.polygon()
        start = vertices
        edge = np.roll(vertices, -1, axis=0) - vertices
        edge_sq = np.sum(edge * edge, axis=1)
        result = np.empty(len(pts))
        for offset in range(0, len(pts), _CHUNK):
            chunk = pts[offset:offset + _CHUNK]
            rel = chunk[:, None, :] - start[None, :, :]
            s = np.clip(np.sum(rel * edge[None], axis=2) / edge_sq, 0.0, 1.0)
            nearest = rel - s[..., None] * edge[None]
            result[offset:offset + _CHUNK] = np.sqrt(np.min(np.sum(nearest * nearest, axis=2), axis=1))
        return result

    def shifted(self, h) -> 'BoundaryCurve':
        hx, hy = as_point(h)
        return BoundaryCurve(self.kind, (self.center[0] + hx, self.center[1] + hy), self.radius)


@dataclass(frozen=True)
class Scatterer:
    """A boundary curve with its boundary condition"""
    curve: BoundaryCurve
    condition: str = 'dirichlet'

    def __post_init__(self):
        if self.condition not in BOUNDARY_CONDITIONS:
            raise GeometryError(f"unknown boundary condition {self.condition!r}; expected one of {BOUNDARY_CONDITIONS}")

    def shifted(self, h) -> 'Scatterer':
        return Scatterer(self.curve.shifted(h), self.condition)


@dataclass(frozen=True)
class Scene:
    """Disjoint scatterers plus an optional reference point scatterer"""
    scatterers: Tuple[Scatterer, ...] = ()
    reference: Optional[PointScatterer] = None

    def __post_init__(self):
        object.__setattr__(self, 'scatterers', tuple(self.scatterers))
        for first in range(len(self.scatterers)):
            for second in range(first + 1, len(self.scatterers)):
                _check_disjoint(self.scatterers[first].curve, self.scatterers[second].curve)
        if self.reference is not None and not self.is_exterior(self.reference.z0):
            raise GeometryError(f"reference point {self.reference.z0} is not outside every curve")

    def __len__(self) -> int:
        return len(self.scatterers)

    @property
    def curves(self) -> Tuple[BoundaryCurve, ...]:
        return tuple(s.curve for s in self.scatterers)

    def is_exterior(self, point) -> bool:
        """True when the point is strictly outside every curve"""
        p = np.asarray(as_point(point))[None, :]
        for curve in self.curves:
            if curve.contains(p)[0] or curve.distance_to(p)[0] == 0.0:
                return False
        return True

    def distance_to(self, points) -> np.ndarray:
        """Distance to the nearest boundary (inf for an empty scene)"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        result = np.full(len(pts), np.inf)
        for curve in self.curves:
            result = np.minimum(result, curve.distance_to(pts))
        return result

    def inside_any(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        result = np.zeros(len(pts), dtype=bool)
        for curve in self.curves:
            result |= curve.contains(pts)
        return result

    def shifted(self, h) -> 'Scene':
        return Scene(tuple(s.shifted(h) for s in self.scatterers), None)

    def with_reference(self, reference: Optional[PointScatterer]) -> 'Scene':
        return Scene(self.scatterers, reference)


def _check_disjoint(first: BoundaryCurve, second: BoundaryCurve):
    b_in_a = first.contains(second.polygon())
    a_in_b = second.contains(first.polygon())
    if b_in_a.all() or a_in_b.all():
        raise GeometryError(f"curves {first} and {second} are nested")
    if b_in_a.any() or a_in_b.any():
        raise GeometryError(f"curves {first} and {second} intersect")


def curve_point(curve: BoundaryCurve, t) -> np.ndarray:
    """x(t) of the parameterization"""
    return curve.point(t)


def curve_derivatives(curve: BoundaryCurve, t) -> Tuple[np.ndarray, np.ndarray]:
    """Exact first and second derivatives of the parameterization"""
    return curve.derivatives(t)


def outward_normal(curve: BoundaryCurve, t) -> np.ndarray:
    """Unit outward normal at parameter t"""
    return curve.normal(t)


def quadrature_nodes(M: int) -> np.ndarray:
    """Equispaced nodes t_i = 2*pi*i/M, i = 0..M-1, for even M"""
    if isinstance(M, bool) or not isinstance(M, (int, np.integer)):
        raise GeometryError(f"node count must be an integer, got {M!r}")
    if M % 2 or M < MIN_QUADRATURE_NODES:
        raise GeometryError(f"node count must be even and >= {MIN_QUADRATURE_NODES}, got {M}")
    return 2.0 * math.pi * np.arange(M) / M
