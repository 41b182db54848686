"""Clustering quality scores against ground truth."""

from math import comb

import numpy as np

from .errors import ConfigurationError

OUTLIER_MODES = ("one_cluster", "singletons")


def _as_labels(labels) -> np.ndarray:
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise ConfigurationError("labels must form a flat sequence")
    if arr.size and not np.issubdtype(arr.dtype, np.integer):
        as_float = arr.astype(np.float64)
        if not np.isfinite(as_float).all() or not np.all(as_float == np.round(as_float)):
            raise ConfigurationError("labels must be integers")
        arr = as_float.astype(np.int64)
    return arr.astype(np.int64)


def _spread_outliers(labels: np.ndarray) -> np.ndarray:
    """Give every -1 entry its own fresh singleton label."""
    out = labels.copy()
    mask = out == -1
    if mask.any():
        fresh = out.max(initial=-1) + 1
        out[mask] = fresh + np.arange(int(mask.sum()))
    return out


def adjusted_rand_index(predicted, truth, outlier_mode: str = "one_cluster") -> float:
    """Chance-corrected pair-counting agreement between two labelings.

    Labels are compared up to renaming; the result is 1.0 exactly when
    the partitions are identical. By default the outlier label -1 acts as
    one ordinary cluster; in "singletons" mode each outlier becomes its
    own cluster in both vectors. Pair counts use exact (arbitrary
    precision) integer arithmetic.
    """
    if outlier_mode not in OUTLIER_MODES:
        raise ConfigurationError(
            f"unknown outlier mode {outlier_mode!r}; expected one of: "
            f"{', '.join(OUTLIER_MODES)}"
        )
    a = _as_labels(predicted)
    b = _as_labels(truth)
    if a.shape != b.shape:
        raise ConfigurationError(
            f"label vectors differ in length: {a.size} vs {b.size}"
        )
    n = int(a.size)
    if n < 2:
        raise ConfigurationError("need at least 2 points to score a clustering")
    if outlier_mode == "singletons":
        a = _spread_outliers(a)
        b = _spread_outliers(b)

    _, ra = np.unique(a, return_inverse=True)
    _, rb = np.unique(b, return_inverse=True)
    n_a = int(ra.max()) + 1
    n_b = int(rb.max()) + 1
    table = np.bincount(ra * n_b + rb, minlength=n_a * n_b).reshape(n_a, n_b)

    index = sum(comb(int(cell), 2) for cell in table.ravel() if cell > 1)
    row_pairs = sum(comb(int(s), 2) for s in table.sum(axis=1))
    col_pairs = sum(comb(int(s), 2) for s in table.sum(axis=0))
    total_pairs = comb(n, 2)

    numerator = 2 * (total_pairs * index - row_pairs * col_pairs)
    denominator = total_pairs * (row_pairs + col_pairs) - 2 * row_pairs * col_pairs
    if denominator == 0:
        # both partitions trivial (all one cluster, or all singletons):
        # they are identical, so perfect agreement
        return 1.0
    return numerator / denominator


def outlier_ratio(labels) -> float:
    """Fraction of points labeled -1."""
    arr = _as_labels(labels)
    if arr.size == 0:
        raise ConfigurationError("cannot compute an outlier ratio of zero labels")
    return float(np.count_nonzero(arr == -1) / arr.size)
