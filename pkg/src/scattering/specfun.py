#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Bessel and Hankel functions of integer order for real arguments

Vectorized over the argument for orders 0..200 and 0 <= x <= 5000:
- x < 1: power series
- 1 <= x < 25, or order > x: Miller backward recurrence normalized with
  J0 + 2*sum(J2k) = 1; Y0 and Y1 come from the Neumann series of the same sweep
- x >= 25: Hankel asymptotic expansion for orders 0 and 1
Y of higher order (and J when order <= x) follow by forward recurrence.
"""

from typing import Tuple, Union
import math

import numpy as np

from config.solver_config import (
    ASYMPTOTIC_ARGUMENT_LIMIT,
    ASYMPTOTIC_TERMS,
    EULER_GAMMA,
    MAX_BESSEL_ARGUMENT,
    MAX_BESSEL_ORDER,
    MILLER_EXTRA_ORDERS,
    MILLER_RESCALE_THRESHOLD,
    SERIES_ARGUMENT_LIMIT,
)
from core.errors import DomainError

ArrayLike = Union[float, np.ndarray]

_SERIES_TERMS = 30
_MILLER_SEED = 1e-30


def _check_order(order) -> int:
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise DomainError(f"order must be a nonnegative integer, got {order!r}")
    if order < 0 or order > MAX_BESSEL_ORDER:
        raise DomainError(f"order {order} outside [0, {MAX_BESSEL_ORDER}]")
    return int(order)


def _check_argument(x, allow_zero: bool) -> np.ndarray:
    values = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(values)):
        raise DomainError("argument must be finite")
    if allow_zero and np.any(values < 0):
        raise DomainError("argument must be >= 0")
    if not allow_zero and np.any(values <= 0):
        raise DomainError("argument must be > 0")
    if np.any(values > MAX_BESSEL_ARGUMENT):
        raise DomainError(f"argument exceeds {MAX_BESSEL_ARGUMENT}")
    return values


def _series_j(order: int, x: np.ndarray) -> np.ndarray:
    half = 0.5 * x
    if order == 0:
        lead = np.ones_like(x)
    else:
        with np.errstate(divide='ignore', under='ignore'):
            safe = np.where(x > 0, half, 1.0)
            lead = np.where(x > 0, np.exp(order * np.log(safe) - math.lgamma(order + 1)), 0.0)
    step = -half * half
    term = np.ones_like(x)
    total = np.ones_like(x)
    for m in range(1, _SERIES_TERMS):
        term = term * step / (m * (m + order))
        total += term
    return lead * total


def _series_y01(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    half = 0.5 * x
    quarter_sq = half * half
    log_half = np.log(half)
    j0 = _series_j(0, x)
    j1 = _series_j(1, x)

    # Y0: sum of (-1)^(m+1) H_m (x^2/4)^m / (m!)^2
    term = np.ones_like(x)
    harmonic = 0.0
    s0 = np.zeros_like(x)
    for m in range(1, _SERIES_TERMS):
        term = term * (-quarter_sq) / (m * m)
        harmonic += 1.0 / m
        s0 -= harmonic * term
    y0 = (2.0 / math.pi) * ((log_half + EULER_GAMMA) * j0 + s0)

    # Y1: digamma(m+1) + digamma(m+2) = H_m + H_(m+1) - 2*gamma
    term = half.copy()
    harmonic = 0.0
    s1 = (1.0 - 2.0 * EULER_GAMMA) * term
    for m in range(1, _SERIES_TERMS):
        term = term * (-quarter_sq) / (m * (m + 1))
        harmonic += 1.0 / m
        s1 += (2.0 * harmonic + 1.0 / (m + 1) - 2.0 * EULER_GAMMA) * term
    y1 = (2.0 / math.pi) * log_half * j1 - 2.0 / (math.pi * x) - s1 / math.pi
    return y0, y1


def _miller(order: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Backward recurrence; returns (J_order, J0, J1, Y0, Y1) for x > 0"""
    top = max(order, int(math.ceil(float(x.max()))), 1)
    start = top + MILLER_EXTRA_ORDERS + int(math.sqrt(40.0 * top))
    if start % 2:
        start += 1

    two_over_x = 2.0 / x
    j_next = np.zeros_like(x)
    j_curr = np.full_like(x, _MILLER_SEED)
    half_start = start // 2
    norm = 2.0 * j_curr
    y0_sum = ((-1.0) ** half_start / half_start) * j_curr
    y1_sum = np.zeros_like(x)
    target = np.zeros_like(x)
    j1 = np.zeros_like(x)

    for m in range(start, 0, -1):
        j_prev = m * two_over_x * j_curr - j_next
        index = m - 1
        if index == order:
            target = j_prev.copy()
        if index == 1:
            j1 = j_prev.copy()
        if index % 2 == 0:
            if index > 0:
                norm += 2.0 * j_prev
                y0_sum += ((-1.0) ** (index // 2) / (index // 2)) * j_prev
            else:
                norm += j_prev
        else:
            upper = (index + 1) // 2
            coefficient = (-1.0) ** upper / upper
            if index >= 3:
                lower = (index - 1) // 2
                coefficient -= (-1.0) ** lower / lower
            y1_sum += coefficient * j_prev

        j_next, j_curr = j_curr, j_prev
        overflow = np.abs(j_curr) > MILLER_RESCALE_THRESHOLD
        if overflow.any():
            scale = np.where(overflow, 1.0 / MILLER_RESCALE_THRESHOLD, 1.0)
            for accumulator in (j_curr, j_next, norm, y0_sum, y1_sum, target, j1):
                accumulator *= scale

    j0 = j_curr / norm
    j1 = j1 / norm
    log_term = np.log(0.5 * x) + EULER_GAMMA
    y0 = (2.0 / math.pi) * (log_term * j0 - 2.0 * y0_sum / norm)
    y1 = (2.0 / math.pi) * (-j0 / x + log_term * j1 + y1_sum / norm)
    return target / norm, j0, j1, y0, y1


def _hankel_asymptotic(nu: int, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    mu = 4.0 * nu * nu
    p = np.ones_like(x)
    q = np.zeros_like(x)
    term = np.ones_like(x)
    for kk in range(1, ASYMPTOTIC_TERMS + 1):
        term = term * (mu - (2 * kk - 1) ** 2) / (8.0 * kk * x)
        if kk % 2:
            q += (-1.0) ** ((kk - 1) // 2) * term
        else:
            p += (-1.0) ** (kk // 2) * term

    # cos/sin of x - phase by angle addition keeps the reduction of x exact
    phase = (0.5 * nu + 0.25) * math.pi
    cos_x, sin_x = np.cos(x), np.sin(x)
    cos_chi = cos_x * math.cos(phase) + sin_x * math.sin(phase)
    sin_chi = sin_x * math.cos(phase) - cos_x * math.sin(phase)
    amplitude = np.sqrt(2.0 / (math.pi * x))
    return amplitude * (p * cos_chi - q * sin_chi), amplitude * (p * sin_chi + q * cos_chi)


def _forward(order: int, x: np.ndarray, c0: np.ndarray, c1: np.ndarray) -> np.ndarray:
    if order == 0:
        return c0
    previous, current = c0, c1
    with np.errstate(over='ignore', invalid='ignore'):
        for m in range(1, order):
            following = (2.0 * m / x) * current - previous
            following = np.where(np.isinf(current), current, following)
            previous, current = current, following
    return current


def _cylinder(order: int, x: np.ndarray, need_y: bool) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """J_order plus Y0, Y1 (left empty when need_y is False) on a flat array"""
    j = np.empty_like(x)
    y0 = np.empty_like(x)
    y1 = np.empty_like(x)
    small = x < SERIES_ARGUMENT_LIMIT
    large = x >= ASYMPTOTIC_ARGUMENT_LIMIT
    middle = ~(small | large)

    if small.any():
        xs = x[small]
        j[small] = _series_j(order, xs)
        if need_y:
            y0[small], y1[small] = _series_y01(xs)

    if middle.any():
        j[middle], _, _, y0[middle], y1[middle] = _miller(order, x[middle])

    if large.any():
        xl = x[large]
        j0, y0_large = _hankel_asymptotic(0, xl)
        j1, y1_large = _hankel_asymptotic(1, xl)
        y0[large], y1[large] = y0_large, y1_large
        j_large = _forward(order, xl, j0, j1)
        beyond = order > xl
        if beyond.any():
            j_large[beyond] = _miller(order, xl[beyond])[0]
        j[large] = j_large

    return j, y0, y1


def _reshape(values: np.ndarray, like: np.ndarray):
    if like.ndim == 0:
        return values.reshape(()).item()
    return values.reshape(like.shape)


def bessel_j(order: int, x: ArrayLike) -> ArrayLike:
    """Bessel function of the first kind J_order(x), x >= 0"""
    order = _check_order(order)
    values = _check_argument(x, allow_zero=True)
    flat = values.ravel()
    j, _, _ = _cylinder(order, flat, need_y=False)
    return _reshape(j, values)


def bessel_jy(order: int, x: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """J_order(x) and Y_order(x) from one sweep, x > 0"""
    order = _check_order(order)
    values = _check_argument(x, allow_zero=False)
    flat = values.ravel()
    j, y0, y1 = _cylinder(order, flat, need_y=True)
    y = _forward(order, flat, y0, y1)
    return _reshape(j, values), _reshape(y, values)


def bessel_y(order: int, x: ArrayLike) -> ArrayLike:
    """Bessel function of the second kind Y_order(x), x > 0"""
    return bessel_jy(order, x)[1]


def hankel1(order: int, x: ArrayLike) -> Union[complex, np.ndarray]:
    """Hankel function of the first kind H1_order(x) = J + iY, x > 0"""
    j, y = bessel_jy(order, x)
    return j + 1j * y


def bessel_jy01(x: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """J0, J1, Y0, Y1 in one pass; the kernel assembly path (x > 0)"""
    values = _check_argument(x, allow_zero=False)
    flat = values.ravel()
    j0 = np.empty_like(flat)
    j1 = np.empty_like(flat)
    y0 = np.empty_like(flat)
    y1 = np.empty_like(flat)
    small = flat < SERIES_ARGUMENT_LIMIT
    large = flat >= ASYMPTOTIC_ARGUMENT_LIMIT
    middle = ~(small | large)

    if small.any():
        xs = flat[small]
        j0[small] = _series_j(0, xs)
        j1[small] = _series_j(1, xs)
        y0[small], y1[small] = _series_y01(xs)
    if middle.any():
        _, j0[middle], j1[middle], y0[middle], y1[middle] = _miller(0, flat[middle])
    if large.any():
        xl = flat[large]
        j0[large], y0[large] = _hankel_asymptotic(0, xl)
        j1[large], y1[large] = _hankel_asymptotic(1, xl)

    shape = values.shape
    return j0.reshape(shape), j1.reshape(shape), y0.reshape(shape), y1.reshape(shape)


def bessel_j_derivative(order: int, x: ArrayLike) -> ArrayLike:
    """J'_order(x) from the three-term relation"""
    if order == 0:
        return -bessel_j(1, x)
    return 0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x))


def hankel1_derivative(order: int, x: ArrayLike) -> Union[complex, np.ndarray]:
    """H1'_order(x) from the three-term relation"""
    if order == 0:
        return -hankel1(1, x)
    return 0.5 * (hankel1(order - 1, x) - hankel1(order + 1, x))
