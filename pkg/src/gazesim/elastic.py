"""Elastic and lock-step distance kernels between 2D trajectories.

The time-warp edit distance follows the per-step recursion with frame-index
timestamps absorbed into the stiffness: deleting a sample from either series
costs its ground distance to the previous sample plus gamma plus lam, and
matching a_p with b_q costs d(a_p,b_q) + d(a_{p-1},b_{q-1}) + 2*gamma*|p-q|.
Both series are prepended with a virtual zero sample at index 0, and the
accumulated-cost grid is returned at its bottom-right cell.

Step costs are precomputed as arrays so the DP inner loops (numba-compiled)
only add and minimize; accumulation is sequential along each path, which
keeps results bit-identical to a direct path-enumeration evaluation.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .errors import EmptySeries, LengthMismatch, ValidationError
from .models import TwedParams


def as_point_series(points) -> np.ndarray:
    """Coerce to a validated (n, 2) float array."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValidationError("a point series must have shape (n, 2)")
    if arr.shape[0] == 0:
        raise EmptySeries("point series")
    if not np.isfinite(arr).all():
        raise ValidationError("point coordinates must be finite")
    return arr


def ground_distance(p, q) -> float:
    """Euclidean distance between two 2D points, in pixels."""
    dx = p[0] - q[0]
    dy = p[1] - q[1]
    return float(np.sqrt(dx * dx + dy * dy))


def _cross_distances(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    dx = a[:, 0][:, None] - b[:, 0][None, :]
    dy = a[:, 1][:, None] - b[:, 1][None, :]
    return np.sqrt(dx * dx + dy * dy)


def _step_distances(a: np.ndarray) -> np.ndarray:
    """d(a_p, a_{p-1}) for p = 1..n over a padded series; index 0 unused."""
    out = np.zeros(len(a))
    dx = a[1:, 0] - a[:-1, 0]
    dy = a[1:, 1] - a[:-1, 1]
    out[1:] = np.sqrt(dx * dx + dy * dy)
    return out


@njit(cache=True, nogil=True)
def _twed_core(del_a: np.ndarray, del_b: np.ndarray, match: np.ndarray) -> float:
    n = del_a.shape[0] - 1
    m = del_b.shape[0] - 1
    delta = np.full((n + 1, m + 1), np.inf)
    delta[0, 0] = 0.0
    for p in range(1, n + 1):
        for q in range(1, m + 1):
            best = delta[p - 1, q] + del_a[p]
            alt = delta[p, q - 1] + del_b[q]
            if alt < best:
                best = alt
            alt = delta[p - 1, q - 1] + match[p, q]
            if alt < best:
                best = alt
            delta[p, q] = best
    return delta[n, m]


def twed(a, b, params: TwedParams) -> float:
    """Time-warp edit distance between two 2D trajectories."""
    a = as_point_series(a)
    b = as_point_series(b)
    pa = np.vstack([np.zeros((1, 2)), a])
    pb = np.vstack([np.zeros((1, 2)), b])
    n, m = len(a), len(b)
    del_a = _step_distances(pa) + params.gamma + params.lam
    del_b = _step_distances(pb) + params.gamma + params.lam
    cross = _cross_distances(pa, pb)
    p_idx = np.arange(n + 1)[:, None]
    q_idx = np.arange(m + 1)[None, :]
    match = np.full((n + 1, m + 1), np.inf)
    match[1:, 1:] = (
        cross[1:, 1:] + cross[:-1, :-1] + 2.0 * params.gamma * np.abs(p_idx - q_idx)[1:, 1:]
    )
    return float(_twed_core(del_a, del_b, match))


@njit(cache=True, nogil=True)
def _dtw_core(cost: np.ndarray) -> float:
    n, m = cost.shape
    delta = np.full((n + 1, m + 1), np.inf)
    delta[0, 0] = 0.0
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best = delta[i - 1, j]
            if delta[i, j - 1] < best:
                best = delta[i, j - 1]
            if delta[i - 1, j - 1] < best:
                best = delta[i - 1, j - 1]
            delta[i, j] = cost[i - 1, j - 1] + best
    return delta[n, m]


def dtw(a, b) -> float:
    """Classic dynamic time warping distance with Euclidean point costs."""
    a = as_point_series(a)
    b = as_point_series(b)
    return float(_dtw_core(_cross_distances(a, b)))


def lockstep_euclidean(a, b) -> float:
    """Lock-step distance: sqrt of the summed squared per-frame distances."""
    a = as_point_series(a)
    b = as_point_series(b)
    if len(a) != len(b):
        raise LengthMismatch(len(a), len(b))
    diff = a - b
    return float(np.sqrt(np.sum(diff * diff)))
