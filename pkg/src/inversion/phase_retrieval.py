#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Phase retrieval by trilateration

Measuring |u_D + tau_j e^{ik z0.(theta - x)}| for three strengths gives, per
entry, the distances from the unknown u_D to three known anchor points
z_j = -tau_j e^{ik z0.(theta - x)}. The point is recovered by intersecting the
two circles that cross most transversally near it and keeping the candidate
whose distance to the remaining anchor best matches its radius. Near the line
through two anchors their circles are almost tangent.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple
import logging
import math

import numpy as np

from config.solver_config import COLLINEARITY_TOLERANCE
from core.errors import DiagnosticsTracker, RetrievalError
from core.models import DirectionGrid, FarFieldMatrix, PhaselessMatrix, Point, as_point
from scattering.forward import point_phase_matrix

activity_logger = logging.getLogger('activity')


def _collinear(a: complex, b: complex, c: complex) -> bool:
    scale = max(abs(b - a), abs(c - a), abs(c - b)) ** 2
    return scale == 0.0 or abs(((b - a) * (c - a).conjugate()).imag) <= COLLINEARITY_TOLERANCE * scale


@dataclass(frozen=True)
class RetrievalTriple:
    """Three scattering strengths, affinely independent as points of the plane"""
    tau1: complex
    tau2: complex
    tau3: complex
    z0: Point
    k: float

    def __post_init__(self):
        for name in ('tau1', 'tau2', 'tau3'):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, 'z0', as_point(self.z0))
        object.__setattr__(self, 'k', float(self.k))
        if not (self.k > 0 and math.isfinite(self.k)):
            raise RetrievalError(f"wavenumber must be positive, got {self.k}")
        if min(abs(self.tau1 - self.tau2), abs(self.tau1 - self.tau3), abs(self.tau2 - self.tau3)) == 0.0:
            raise RetrievalError("strengths must be pairwise distinct")
        if _collinear(self.tau1, self.tau2, self.tau3):
            raise RetrievalError(f"strengths {self.taus} are collinear")

    @property
    def taus(self) -> Tuple[complex, complex, complex]:
        return (self.tau1, self.tau2, self.tau3)


@dataclass(frozen=True, eq=False)
class TrilaterationWork:
    """
    Intermediate quantities of the construction, entrywise arrays

    `order` holds the anchor indices (first, pivot, third) used for each entry:
    the candidates lie on the circles about the first and pivot anchors.
    """
    anchors: Tuple[np.ndarray, np.ndarray, np.ndarray]
    distances: Tuple[np.ndarray, np.ndarray, np.ndarray]
    order: np.ndarray
    estimate: np.ndarray
    midpoint: np.ndarray
    alpha: np.ndarray
    candidate_a: np.ndarray
    candidate_b: np.ndarray
    result: np.ndarray
    clamped: np.ndarray


# (first, pivot, third); the first row is the plain z1, z2, z3 labelling
PAIR_ORDERS = np.array([(0, 1, 2), (0, 2, 1), (1, 2, 0)])


def _linear_estimate(z1, z2, z3, r1, r2, r3):
    """Solve 2 Re(conj(z_j - z1) w) = r1^2 - r_j^2 + |z_j - z1|^2, j = 2, 3, for w = z - z1"""
    a2, a3 = z2 - z1, z3 - z1
    b2 = 0.5 * (r1 ** 2 - r2 ** 2 + np.abs(a2) ** 2)
    b3 = 0.5 * (r1 ** 2 - r3 ** 2 + np.abs(a3) ** 2)
    det = a2.real * a3.imag - a2.imag * a3.real
    safe_det = np.where(det != 0.0, det, 1.0)
    x = (b2 * a3.imag - b3 * a2.imag) / safe_det
    y = (a2.real * b3 - a3.real * b2) / safe_det
    return z1 + x + 1j * y, det != 0.0


def _transversality(estimate, za, zb):
    """|sin| of the angle between the two circles through the estimate"""
    wa, wb = estimate - za, estimate - zb
    norm = np.abs(wa) * np.abs(wb)
    safe = np.where(norm > 0, norm, 1.0)
    return np.where(norm > 0, np.abs((np.conj(wa) * wb).imag) / safe, 0.0)


def trilateration_work(anchors, distances) -> TrilaterationWork:
    """
    Vectorized construction; anchors and distances are triples of equally shaped arrays

    Step 1 returns an anchor whose distance is zero. Otherwise the linear system
    of circle differences gives an estimate of the point, and the anchor pair
    whose circles cross most transversally there is used: the point M on the ray
    pivot -> first at distance r_pivot from the pivot is rotated about the pivot
    by -alpha and +alpha, cos(alpha) = (d^2 + r_pivot^2 - r_first^2) /
    (2 d r_pivot) clamped to [-1, 1], and the candidate closer to the circle
    about the third anchor wins (ties go to the -alpha rotation).
    """
    z = np.stack(np.broadcast_arrays(*(np.asarray(a, dtype=complex) for a in anchors)))
    r = np.stack(np.broadcast_arrays(*(np.asarray(d, dtype=float) for d in distances)))
    if z.shape != r.shape:
        raise RetrievalError(f"anchors of shape {z.shape[1:]} do not match distances of shape {r.shape[1:]}")
    if np.any(r < 0):
        raise RetrievalError("distances must be nonnegative")
    if np.any(z[0] == z[1]):
        raise RetrievalError("anchors must be pairwise distinct")

    estimate, solvable = _linear_estimate(*z, *r)
    scores = np.stack([
        np.where(z[f] != z[p], _transversality(estimate, z[f], z[p]), -1.0)
        for f, p, _ in PAIR_ORDERS
    ])
    choice = np.where(solvable, np.argmax(scores, axis=0), 0)
    order = np.moveaxis(PAIR_ORDERS[choice], -1, 0)
    zf, zp, zt = (np.take_along_axis(z, i[None], axis=0)[0] for i in order)
    rf, rp, rt = (np.take_along_axis(r, i[None], axis=0)[0] for i in order)

    d = np.abs(zf - zp)
    safe_rp = np.where(rp > 0, rp, 1.0)
    midpoint = zp + rp * (zf - zp) / d
    cos_alpha = (d ** 2 + rp ** 2 - rf ** 2) / (2.0 * d * safe_rp)
    clamped = np.abs(cos_alpha) > 1.0
    alpha = np.arccos(np.clip(cos_alpha, -1.0, 1.0))
    candidate_a = zp + (midpoint - zp) * np.exp(-1j * alpha)
    candidate_b = zp + (midpoint - zp) * np.exp(1j * alpha)
    miss_a = np.abs(np.abs(candidate_a - zt) - rt)
    miss_b = np.abs(np.abs(candidate_b - zt) - rt)
    result = np.where(miss_b < miss_a, candidate_b, candidate_a)

    z1, z2, z3 = z
    r1, r2, r3 = r
    result = np.where(r3 == 0.0, z3, result)
    result = np.where(r2 == 0.0, z2, result)
    result = np.where(r1 == 0.0, z1, result)
    clamped &= (r1 > 0) & (r2 > 0) & (r3 > 0)
    return TrilaterationWork((z1, z2, z3), (r1, r2, r3), order, estimate, midpoint, alpha,
                             candidate_a, candidate_b, result, clamped)


def trilaterate(anchors: Sequence[complex], distances: Sequence[float]) -> complex:
    """Point whose distances to three non-collinear anchors best match the given ones"""
    if len(anchors) != 3 or len(distances) != 3:
        raise RetrievalError("trilateration needs exactly three anchors and three distances")
    a, b, c = (complex(z) for z in anchors)
    if _collinear(a, b, c):
        raise RetrievalError(f"anchors {a}, {b}, {c} are collinear")
    work = trilateration_work((a, b, c), tuple(float(r) for r in distances))
    return complex(work.result)


def _check_metadata(moduli: Sequence[PhaselessMatrix], triple: RetrievalTriple):
    if len(moduli) != 3:
        raise RetrievalError(f"retrieval needs three phaseless matrices, got {len(moduli)}")
    N = moduli[0].N
    for index, (matrix, tau) in enumerate(zip(moduli, triple.taus)):
        if matrix.N != N:
            raise RetrievalError(f"matrix {index} has N={matrix.N}, expected {N}")
        if not math.isclose(matrix.k, triple.k, rel_tol=1e-12):
            raise RetrievalError(f"matrix {index} has k={matrix.k}, expected {triple.k}")
        if matrix.z0 is not None and matrix.z0 != triple.z0:
            raise RetrievalError(f"matrix {index} was measured with z0={matrix.z0}, expected {triple.z0}")
        if matrix.tau is not None and matrix.tau != tau:
            raise RetrievalError(f"matrix {index} was measured with tau={matrix.tau}, expected {tau}")


def retrieve_far_field(moduli: Sequence[PhaselessMatrix], triple: RetrievalTriple,
                       tracker: Optional[DiagnosticsTracker] = None) -> FarFieldMatrix:
    """Phased obstacle far field from three phaseless measurements with the reference point"""
    _check_metadata(moduli, triple)
    grid = DirectionGrid(moduli[0].N)
    phase = point_phase_matrix(triple.z0, triple.k, grid)
    anchors = tuple(-tau * phase for tau in triple.taus)
    work = trilateration_work(anchors, tuple(m.entries for m in moduli))

    clamped = int(np.count_nonzero(work.clamped))
    if clamped:
        message = f"{clamped} of {grid.N ** 2} entries had non-intersecting circles"
        if tracker is not None:
            tracker.record('inconsistent_circles', 'phase_retrieval', message, count=clamped)
        else:
            activity_logger.info(message)
    activity_logger.info(f"Retrieved {grid.N}x{grid.N} phased far field with z0={triple.z0}")
    return FarFieldMatrix(work.result, triple.k, 'retrieved', None, triple.z0)


def incidence_profile(U: FarFieldMatrix, incidence) -> Tuple[np.ndarray, np.ndarray]:
    """Observation angles and the far-field column of one incidence direction"""
    grid = U.grid
    index = grid.index_of(incidence)
    return grid.angles, U.entries[:, index].copy()


def retrieval_error(retrieved, truth) -> float:
    """max|retrieved - truth| / max|truth| (absolute when truth vanishes)"""
    a = retrieved.entries if isinstance(retrieved, FarFieldMatrix) else np.asarray(retrieved)
    b = truth.entries if isinstance(truth, FarFieldMatrix) else np.asarray(truth)
    if a.shape != b.shape:
        raise RetrievalError(f"shape mismatch {a.shape} vs {b.shape}")
    error = float(np.max(np.abs(a - b)))
    scale = float(np.max(np.abs(b)))
    return error / scale if scale > 0 else error
