"""Kernel density estimation over edge distances and threshold derivation.

The estimated curve is the exact kernel sum evaluated on a uniform grid;
its maxima/minima drive the mid-distance thresholds used to split the
spanning forest.
"""

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from ._accel import USING_NUMBA, njit
from .errors import ConfigurationError, PipelineError

KERNELS = ("gaussian", "uniform", "triangular")

_KERNEL_IDS = {"gaussian": 0, "uniform": 1, "triangular": 2}
_GAUSS_NORM = 1.0 / math.sqrt(2.0 * math.pi)
_GRID_CHUNK = 128


def validate_kernel(kernel: str) -> None:
    if kernel not in KERNELS:
        raise ConfigurationError(
            f"unknown kernel {kernel!r}; expected one of: {', '.join(KERNELS)}"
        )


class Extremum(NamedTuple):
    position: float
    kind: str  # "maximum" or "minimum"


@dataclass(frozen=True)
class DensityCurve:
    """Estimated p.d.f. of edge distances sampled on an ascending grid."""

    grid: np.ndarray
    values: np.ndarray
    bandwidth: float
    sample_count: int

    def integral(self) -> float:
        """Trapezoidal integral of the curve over its grid."""
        return float(np.trapezoid(self.values, self.grid))

    def rows(self) -> Iterator[tuple[float, float]]:
        for position, value in zip(self.grid, self.values):
            yield float(position), float(value)


def _kde_np(samples, positions, bandwidth, kernel_id):
    m = samples.size
    out = np.empty(positions.size)
    for s in range(0, positions.size, _GRID_CHUNK):
        z = (positions[s : s + _GRID_CHUNK, None] - samples[None, :]) / bandwidth
        if kernel_id == 0:
            kv = np.exp(-0.5 * z * z) * _GAUSS_NORM
        elif kernel_id == 1:
            kv = np.where(np.abs(z) <= 1.0, 0.5, 0.0)
        else:
            kv = np.maximum(1.0 - np.abs(z), 0.0)
        out[s : s + _GRID_CHUNK] = kv.sum(axis=1)
    return out / (m * bandwidth)


@njit(cache=True)
def _kde_nb(samples, positions, bandwidth, kernel_id):
    m = samples.size
    out = np.empty(positions.size)
    for i in range(positions.size):
        acc = 0.0
        for j in range(m):
            z = (positions[i] - samples[j]) / bandwidth
            if kernel_id == 0:
                acc += np.exp(-0.5 * z * z) * _GAUSS_NORM
            elif kernel_id == 1:
                if abs(z) <= 1.0:
                    acc += 0.5
            else:
                az = abs(z)
                if az <= 1.0:
                    acc += 1.0 - az
        out[i] = acc / (m * bandwidth)
    return out


_kde = _kde_nb if USING_NUMBA else _kde_np


def evaluate_density(distances, bandwidth: float, kernel: str, positions) -> np.ndarray:
    """Evaluate the kernel density estimate at arbitrary positions."""
    validate_kernel(kernel)
    if bandwidth <= 0.0 or not math.isfinite(bandwidth):
        raise ConfigurationError(f"bandwidth must be positive, got {bandwidth}")
    samples = np.ascontiguousarray(distances, dtype=np.float64)
    if samples.ndim != 1 or samples.size == 0:
        raise PipelineError("density estimation needs at least one distance")
    where = np.ascontiguousarray(positions, dtype=np.float64)
    return _kde(samples, where, float(bandwidth), _KERNEL_IDS[kernel])


def estimate_density(
    distances, bandwidth: float, kernel: str = "gaussian", grid_size: int = 1024
) -> DensityCurve:
    """Kernel density estimate of edge distances on a padded uniform grid.

    The grid spans [min - margin, max + margin] with margin 4h for the
    gaussian kernel and h for the compactly supported ones, so the curve
    captures essentially all of the kernel mass.
    """
    validate_kernel(kernel)
    if grid_size < 16:
        raise ConfigurationError(f"grid_size must be at least 16, got {grid_size}")
    if bandwidth <= 0.0 or not math.isfinite(bandwidth):
        raise ConfigurationError(f"bandwidth must be positive, got {bandwidth}")
    samples = np.ascontiguousarray(distances, dtype=np.float64)
    if samples.ndim != 1 or samples.size == 0:
        raise PipelineError(
            "no edge distances to estimate a density from (edgeless forest)"
        )
    margin = 4.0 * bandwidth if kernel == "gaussian" else float(bandwidth)
    grid = np.linspace(samples.min() - margin, samples.max() + margin, int(grid_size))
    values = _kde(samples, grid, float(bandwidth), _KERNEL_IDS[kernel])
    return DensityCurve(
        grid=grid,
        values=values,
        bandwidth=float(bandwidth),
        sample_count=int(samples.size),
    )


def locate_extrema(curve: DensityCurve) -> list[Extremum]:
    """Alternating maxima/minima of the curve on its grid.

    Runs of equal values collapse to their center grid point. A boundary
    run counts as a maximum when its single interior neighbor is strictly
    smaller; boundary minima are not reported, so any non-empty result
    starts and ends with a maximum.
    """
    values = np.asarray(curve.values, dtype=np.float64)
    grid = np.asarray(curve.grid, dtype=np.float64)
    if values.size != grid.size:
        raise ConfigurationError("curve grid and values have different lengths")
    if values.size < 2:
        return []

    change = np.flatnonzero(np.diff(values) != 0.0)
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change, [values.size - 1]))
    run_values = values[starts]
    if run_values.size < 2:
        return []

    found: list[Extremum] = []
    last = run_values.size - 1
    for r in range(run_values.size):
        val = run_values[r]
        center = float(grid[(int(starts[r]) + int(ends[r])) // 2])
        if r == 0:
            if run_values[1] < val:
                found.append(Extremum(center, "maximum"))
        elif r == last:
            if run_values[last - 1] < val:
                found.append(Extremum(center, "maximum"))
        else:
            left, right = run_values[r - 1], run_values[r + 1]
            if left < val and right < val:
                found.append(Extremum(center, "maximum"))
            elif left > val and right > val:
                found.append(Extremum(center, "minimum"))
    return found


def derive_thresholds(extrema) -> np.ndarray:
    """Midpoints between consecutive extrema, strictly descending.

    Fewer than two extrema yield no thresholds. Non-positive midpoints
    (possible only for pathological curves) are dropped, since no
    non-negative distance can exceed them.
    """
    items = list(extrema)
    for first, second in zip(items, items[1:]):
        if first.kind == second.kind:
            raise ConfigurationError("extrema must alternate between kinds")
        if not second.position > first.position:
            raise ConfigurationError("extrema positions must be strictly ascending")
    if len(items) < 2:
        return np.empty(0, dtype=np.float64)
    positions = np.asarray([e.position for e in items], dtype=np.float64)
    mids = (positions[:-1] + positions[1:]) * 0.5
    mids = mids[mids > 0.0]
    return mids[::-1].copy()
