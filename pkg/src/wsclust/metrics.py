"""Distance functions used to weight neighbor-graph edges.

Every metric here is symmetric and reflexive. Cosine and Bray-Curtis do
not satisfy the triangle inequality, and no downstream stage assumes
metricity.

Conventions for degenerate inputs:
  - canberra: a coordinate with p_i = q_i = 0 contributes 0
  - bray_curtis: a zero denominator yields distance 0
  - cosine: one zero vector -> 1, two zero vectors -> 0
"""

import numpy as np

from ._accel import USING_NUMBA, njit
from .errors import ConfigurationError, DataError

METRICS = ("euclidean", "manhattan", "canberra", "bray_curtis", "cosine")

_CHUNK = 256


def validate_metric(metric: str) -> None:
    if metric not in METRICS:
        raise ConfigurationError(
            f"unknown metric {metric!r}; expected one of: {', '.join(METRICS)}"
        )


def as_point_matrix(points) -> np.ndarray:
    """Coerce input rows to a finite float64 (n, dim) matrix."""
    try:
        matrix = np.asarray(points, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise DataError(f"points are not numeric or not rectangular: {exc}") from exc
    if matrix.ndim != 2:
        raise DataError(f"points must form a 2-d matrix, got shape {matrix.shape}")
    if matrix.shape[0] < 1 or matrix.shape[1] < 1:
        raise DataError(f"points matrix must be non-empty, got shape {matrix.shape}")
    if not np.isfinite(matrix).all():
        bad = int(np.argwhere(~np.isfinite(matrix).all(axis=1))[0, 0])
        raise DataError(f"non-finite feature value in point {bad}")
    return matrix


# ---------------------------------------------------------------------------
# numpy implementations (chunked over rows to bound the broadcast buffers)
# ---------------------------------------------------------------------------


def _pairwise_euclidean_np(X):
    n = X.shape[0]
    out = np.empty((n, n))
    for s in range(0, n, _CHUNK):
        block = X[s : s + _CHUNK]
        diff = block[:, None, :] - X[None, :, :]
        out[s : s + _CHUNK] = np.sqrt((diff * diff).sum(axis=2))
    return out


def _pairwise_manhattan_np(X):
    n = X.shape[0]
    out = np.empty((n, n))
    for s in range(0, n, _CHUNK):
        block = X[s : s + _CHUNK]
        out[s : s + _CHUNK] = np.abs(block[:, None, :] - X[None, :, :]).sum(axis=2)
    return out


def _pairwise_canberra_np(X):
    n = X.shape[0]
    out = np.empty((n, n))
    absx = np.abs(X)
    for s in range(0, n, _CHUNK):
        block = X[s : s + _CHUNK]
        num = np.abs(block[:, None, :] - X[None, :, :])
        den = absx[s : s + _CHUNK][:, None, :] + absx[None, :, :]
        terms = np.divide(num, den, out=np.zeros_like(num), where=den > 0.0)
        out[s : s + _CHUNK] = terms.sum(axis=2)
    return out


def _pairwise_bray_curtis_np(X):
    n = X.shape[0]
    out = np.empty((n, n))
    for s in range(0, n, _CHUNK):
        block = X[s : s + _CHUNK]
        num = np.abs(block[:, None, :] - X[None, :, :]).sum(axis=2)
        den = np.abs(block[:, None, :] + X[None, :, :]).sum(axis=2)
        out[s : s + _CHUNK] = np.divide(
            num, den, out=np.zeros_like(num), where=den > 0.0
        )
    return out


def _pairwise_cosine_np(X):
    norms = np.sqrt((X * X).sum(axis=1))
    dots = X @ X.T
    dots = (dots + dots.T) * 0.5  # exact symmetry regardless of BLAS blocking
    denom = np.outer(norms, norms)
    cos = np.divide(dots, denom, out=np.zeros_like(dots), where=denom > 0.0)
    out = 1.0 - cos
    zero = norms == 0.0
    out[zero[:, None] ^ zero[None, :]] = 1.0
    out[zero[:, None] & zero[None, :]] = 0.0
    np.clip(out, 0.0, 2.0, out=out)
    np.fill_diagonal(out, 0.0)
    return out


# ---------------------------------------------------------------------------
# numba implementations (upper triangle only, mirrored for exact symmetry)
# ---------------------------------------------------------------------------


@njit(cache=True)
def _pairwise_euclidean_nb(X):
    n, d = X.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for t in range(d):
                diff = X[i, t] - X[j, t]
                acc += diff * diff
            val = np.sqrt(acc)
            out[i, j] = val
            out[j, i] = val
    return out


@njit(cache=True)
def _pairwise_manhattan_nb(X):
    n, d = X.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for t in range(d):
                acc += abs(X[i, t] - X[j, t])
            out[i, j] = acc
            out[j, i] = acc
    return out


@njit(cache=True)
def _pairwise_canberra_nb(X):
    n, d = X.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for t in range(d):
                den = abs(X[i, t]) + abs(X[j, t])
                if den > 0.0:
                    acc += abs(X[i, t] - X[j, t]) / den
            out[i, j] = acc
            out[j, i] = acc
    return out


@njit(cache=True)
def _pairwise_bray_curtis_nb(X):
    n, d = X.shape
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            num = 0.0
            den = 0.0
            for t in range(d):
                num += abs(X[i, t] - X[j, t])
                den += abs(X[i, t] + X[j, t])
            val = num / den if den > 0.0 else 0.0
            out[i, j] = val
            out[j, i] = val
    return out


@njit(cache=True)
def _pairwise_cosine_nb(X):
    n, d = X.shape
    norms = np.zeros(n)
    for i in range(n):
        acc = 0.0
        for t in range(d):
            acc += X[i, t] * X[i, t]
        norms[i] = np.sqrt(acc)
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            if norms[i] == 0.0 and norms[j] == 0.0:
                val = 0.0
            elif norms[i] == 0.0 or norms[j] == 0.0:
                val = 1.0
            else:
                dot = 0.0
                for t in range(d):
                    dot += X[i, t] * X[j, t]
                val = 1.0 - dot / (norms[i] * norms[j])
                if val < 0.0:
                    val = 0.0
                elif val > 2.0:
                    val = 2.0
            out[i, j] = val
            out[j, i] = val
    return out


PAIRWISE_NUMPY = {
    "euclidean": _pairwise_euclidean_np,
    "manhattan": _pairwise_manhattan_np,
    "canberra": _pairwise_canberra_np,
    "bray_curtis": _pairwise_bray_curtis_np,
    "cosine": _pairwise_cosine_np,
}

PAIRWISE_NUMBA = {
    "euclidean": _pairwise_euclidean_nb,
    "manhattan": _pairwise_manhattan_nb,
    "canberra": _pairwise_canberra_nb,
    "bray_curtis": _pairwise_bray_curtis_nb,
    "cosine": _pairwise_cosine_nb,
}

_PAIRWISE = PAIRWISE_NUMBA if USING_NUMBA else PAIRWISE_NUMPY


def pairwise_distances(points, metric: str = "euclidean") -> np.ndarray:
    """Full symmetric distance matrix between all rows of `points`."""
    validate_metric(metric)
    X = np.ascontiguousarray(as_point_matrix(points))
    return _PAIRWISE[metric](X)


def distance(metric: str, p, q) -> float:
    """Distance between two points under the named metric."""
    validate_metric(metric)
    pv = np.asarray(p, dtype=np.float64)
    qv = np.asarray(q, dtype=np.float64)
    if pv.ndim != 1 or qv.ndim != 1:
        raise ConfigurationError("distance expects two 1-d feature vectors")
    if pv.shape != qv.shape:
        raise ConfigurationError(
            f"dimension mismatch: {pv.shape[0]} vs {qv.shape[0]}"
        )
    if pv.size == 0:
        raise ConfigurationError("points must have at least one feature")
    if not (np.isfinite(pv).all() and np.isfinite(qv).all()):
        raise DataError("non-finite feature value")
    if np.array_equal(pv, qv):
        return 0.0
    stacked = np.ascontiguousarray(np.stack((pv, qv)))
    return float(_PAIRWISE[metric](stacked)[0, 1])
