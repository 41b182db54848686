"""CSV dataset ingestion and the flat-text output formats."""

import csv

import numpy as np

from .density import DensityCurve
from .errors import ConfigurationError, DataError


def _resolve_label_column(spec, width: int) -> int:
    if spec == "last":
        return width - 1
    if spec == "first":
        return 0
    try:
        index = int(spec)
    except (TypeError, ValueError):
        raise ConfigurationError(
            f"label column must be an integer, 'first' or 'last', got {spec!r}"
        ) from None
    if index < 0:
        index += width
    if not 0 <= index < width:
        raise ConfigurationError(
            f"label column {spec!r} out of range for {width} columns"
        )
    return index


def load_dataset(path, has_header: bool = False, label_column=None):
    """Read a rectangular numeric CSV, optionally splitting a label column.

    Returns (points, labels) where labels is None unless label_column is
    given. Parse failures report the 1-based line number, counting any
    header line.
    """
    try:
        handle = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc

    rows: list[list[float]] = []
    width = None
    first_data_line = 2 if has_header else 1
    with handle:
        reader = csv.reader(handle)
        for lineno, row in enumerate(reader, start=1):
            if has_header and lineno == 1:
                continue
            if not row or (len(row) == 1 and row[0].strip() == ""):
                continue  # ignore blank lines
            if width is None:
                width = len(row)
            elif len(row) != width:
                raise DataError(
                    f"{path}: line {lineno}: expected {width} columns, found {len(row)}"
                )
            values = []
            for col, cell in enumerate(row):
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: line {lineno}: non-numeric value {cell.strip()!r} "
                        f"in column {col}"
                    ) from None
                if not np.isfinite(value):
                    raise DataError(
                        f"{path}: line {lineno}: non-finite value in column {col}"
                    )
                values.append(value)
            rows.append(values)

    if not rows:
        raise DataError(f"{path}: no data rows found")
    matrix = np.asarray(rows, dtype=np.float64)

    if label_column is None:
        if matrix.shape[1] < 1:
            raise DataError(f"{path}: rows have no columns")
        return matrix, None

    col = _resolve_label_column(label_column, matrix.shape[1])
    if matrix.shape[1] < 2:
        raise DataError(f"{path}: need at least 2 columns to split off labels")
    raw_labels = matrix[:, col]
    if not np.all(raw_labels == np.round(raw_labels)):
        bad = int(np.flatnonzero(raw_labels != np.round(raw_labels))[0])
        raise DataError(
            f"{path}: line {bad + first_data_line}: label column is not integer-valued"
        )
    points = np.delete(matrix, col, axis=1)
    return points, raw_labels.astype(np.int64)


def write_labels(path, labels) -> None:
    """One integer per line, row-aligned with the input dataset."""
    with open(path, "w", encoding="utf-8") as handle:
        for label in labels:
            handle.write(f"{int(label)}\n")


def read_labels(path) -> np.ndarray:
    try:
        handle = open(path, encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    labels = []
    with handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.strip()
            if not text:
                continue
            try:
                labels.append(int(text))
            except ValueError:
                raise DataError(
                    f"{path}: line {lineno}: expected an integer label, got {text!r}"
                ) from None
    if not labels:
        raise DataError(f"{path}: no labels found")
    return np.asarray(labels, dtype=np.int64)


def write_density_curve(path, curve: DensityCurve) -> None:
    """Two-column text: grid position and density value per line."""
    with open(path, "w", encoding="utf-8") as handle:
        for position, value in curve.rows():
            handle.write(f"{position:.6g} {value:.6g}\n")


def write_history_csv(path, history) -> None:
    """Tuning history as a flat CSV table, one row per trial."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(
            [
                "trial_index",
                "k",
                "bandwidth",
                "kernel",
                "lambda",
                "alpha",
                "metric",
                "grid_size",
                "min_cluster_size",
                "agglomeration",
                "seed",
                "ari",
                "outlier_ratio",
            ]
        )
        for record in history:
            params = record.params
            writer.writerow(
                [
                    record.trial_index,
                    params.n_neighbors,
                    f"{params.bandwidth:.6g}",
                    params.kernel,
                    f"{params.distance_threshold:.6g}",
                    f"{params.wasserstein_threshold:.6g}",
                    params.metric,
                    params.grid_size,
                    params.min_cluster_size,
                    params.agglomeration_mode.replace("_", "-"),
                    params.seed,
                    f"{record.ari:.6g}",
                    f"{record.outlier_ratio:.6g}",
                ]
            )
