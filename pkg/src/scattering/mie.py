#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Series solutions for scattering of plane waves by a disk

With u^i = exp(ik x.theta) and phi, theta the polar angles of x_hat, theta_hat:
    u^inf(x_hat, theta_hat) = -4i [c_0 + 2 sum_{n>=1} c_n cos(n(phi - theta))]
    c_n = -J_n(ka) / H_n(ka)     (sound-soft)
    c_n = -J_n'(ka) / H_n'(ka)   (sound-hard)
A disk centered at h picks up the factor exp(ik h.(theta_hat - x_hat)).
"""

from typing import Tuple
import math

import numpy as np

from config.solver_config import MIE_EXTRA_ORDERS
from core.errors import DomainError
from core.models import DirectionGrid, FarFieldMatrix, as_point
from scattering.geometry import BOUNDARY_CONDITIONS
from scattering.specfun import bessel_jy, bessel_j_derivative, hankel1_derivative


def mie_order(radius: float, k: float) -> int:
    """Truncation order ceil(ka) + 40"""
    return int(math.ceil(k * radius)) + MIE_EXTRA_ORDERS


def mie_coefficients(radius: float, condition: str, k: float) -> np.ndarray:
    """c_0..c_L of the scattered field"""
    if not (radius > 0 and k > 0):
        raise DomainError("radius and wavenumber must be positive")
    if condition not in BOUNDARY_CONDITIONS:
        raise DomainError(f"unknown boundary condition {condition!r}")
    ka = k * radius
    coefficients = np.empty(mie_order(radius, k) + 1, dtype=complex)
    for n in range(len(coefficients)):
        if condition == 'dirichlet':
            j, y = bessel_jy(n, ka)
            coefficients[n] = -j / (j + 1j * y)
        else:
            coefficients[n] = -bessel_j_derivative(n, ka) / hankel1_derivative(n, ka)
    return coefficients


def _angular_sum(coefficients: np.ndarray, angle: np.ndarray) -> np.ndarray:
    orders = np.arange(1, len(coefficients))
    return coefficients[0] + 2.0 * np.cos(np.multiply.outer(angle, orders)) @ coefficients[1:]


def mie_far_field_circle(radius: float, center, condition: str, k: float,
                         grid: DirectionGrid) -> FarFieldMatrix:
    """Exact far-field matrix of a disk, rows = observation, columns = incidence"""
    coefficients = mie_coefficients(radius, condition, k)
    angles = grid.angles
    entries = -4j * _angular_sum(coefficients, angles[:, None] - angles[None, :])
    h = np.asarray(as_point(center))
    if np.any(h != 0.0):
        projection = k * (grid.directions @ h)
        entries = entries * np.exp(1j * (projection[None, :] - projection[:, None]))
    return FarFieldMatrix(entries, k, 'obstacle-only')


def mie_scattered_field(radius: float, center, condition: str, k: float,
                        direction: Tuple[float, float], points) -> np.ndarray:
    """Scattered field of a disk at exterior points for one incident direction"""
    h = np.asarray(as_point(center))
    d = np.asarray(as_point(direction))
    pts = np.atleast_2d(np.asarray(points, dtype=float)) - h
    r = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(r <= radius):
        raise DomainError("evaluation points must lie outside the disk")
    coefficients = mie_coefficients(radius, condition, k)
    relative = np.arctan2(pts[:, 1], pts[:, 0]) - math.atan2(d[1], d[0])

    total = coefficients[0] * _hankel(0, k * r)
    for n in range(1, len(coefficients)):
        total += 2.0 * coefficients[n] * (1j ** n) * _hankel(n, k * r) * np.cos(n * relative)
    return np.exp(1j * k * float(h @ d)) * total


def _hankel(order: int, x: np.ndarray) -> np.ndarray:
    j, y = bessel_jy(order, x)
    return j + 1j * y
