"""Random-search hyperparameter optimization maximizing the ARI."""

import math
from dataclasses import dataclass, field

import numpy as np

from .density import KERNELS
from .errors import ConfigurationError, DataError, PipelineError
from .evaluation import adjusted_rand_index
from .metrics import as_point_matrix
from .pipeline import ClusteringParams, fit

SCALES = ("linear", "log")


def _check_real_range(name, rng_tuple):
    low, high, scale = rng_tuple
    if scale not in SCALES:
        raise ConfigurationError(f"{name}: unknown scale {scale!r}")
    if not (math.isfinite(low) and math.isfinite(high)):
        raise ConfigurationError(f"{name}: bounds must be finite")
    if low > high:
        raise ConfigurationError(f"{name}: lower bound {low} exceeds upper {high}")
    if scale == "log" and low <= 0.0:
        raise ConfigurationError(f"{name}: log-scaled ranges must be strictly positive")


def _draw_real(rng, rng_tuple):
    low, high, scale = rng_tuple
    if low == high:
        return float(low)
    if scale == "log":
        return float(math.exp(rng.uniform(math.log(low), math.log(high))))
    return float(rng.uniform(low, high))


@dataclass(frozen=True)
class SearchSpace:
    """Sampling ranges for random search.

    Real ranges are (low, high, scale) with scale "linear" or "log";
    defaults follow the log-uniform convention since useful bandwidths
    and merge thresholds span orders of magnitude. `fixed` holds
    ClusteringParams field overrides applied after sampling.
    """

    n_neighbors_range: tuple[int, int] = (2, 30)
    bandwidth_range: tuple[float, float, str] = (1e-3, 10.0, "log")
    distance_threshold_range: tuple[float, float, str] = (1e-3, 100.0, "log")
    wasserstein_threshold_range: tuple[float, float, str] = (1e-4, 10.0, "log")
    kernel_choices: tuple[str, ...] = ("gaussian",)
    fixed: dict = field(default_factory=dict)

    def validate(self) -> None:
        k_lo, k_hi = self.n_neighbors_range
        if k_lo > k_hi or k_lo < 1:
            raise ConfigurationError(
                f"n_neighbors range must satisfy 1 <= low <= high, got "
                f"({k_lo}, {k_hi})"
            )
        _check_real_range("bandwidth", self.bandwidth_range)
        _check_real_range("distance threshold", self.distance_threshold_range)
        _check_real_range("wasserstein threshold", self.wasserstein_threshold_range)
        if not self.kernel_choices:
            raise ConfigurationError("kernel_choices must not be empty")
        for kernel in self.kernel_choices:
            if kernel not in KERNELS:
                raise ConfigurationError(f"unknown kernel {kernel!r}")
        probe = ClusteringParams(
            n_neighbors=max(k_lo, 1),
            bandwidth=1.0,
            distance_threshold=1.0,
            wasserstein_threshold=1.0,
        )
        probe.with_overrides(**self.fixed)  # rejects unknown override names

    def sample(self, rng: np.random.Generator) -> ClusteringParams:
        """Draw one parameter vector; draw order is fixed for stream stability."""
        k_lo, k_hi = self.n_neighbors_range
        k = k_lo if k_lo == k_hi else int(rng.integers(k_lo, k_hi + 1))
        bandwidth = _draw_real(rng, self.bandwidth_range)
        distance_threshold = _draw_real(rng, self.distance_threshold_range)
        wasserstein_threshold = _draw_real(rng, self.wasserstein_threshold_range)
        if len(self.kernel_choices) == 1:
            kernel = self.kernel_choices[0]
        else:
            kernel = self.kernel_choices[int(rng.integers(len(self.kernel_choices)))]
        params = ClusteringParams(
            n_neighbors=k,
            bandwidth=bandwidth,
            distance_threshold=distance_threshold,
            wasserstein_threshold=wasserstein_threshold,
            kernel=kernel,
        )
        if self.fixed:
            params = params.with_overrides(**self.fixed)
        return params


@dataclass(frozen=True)
class TrialRecord:
    trial_index: int
    params: ClusteringParams
    ari: float
    outlier_ratio: float


def random_search(
    points,
    truth,
    space: SearchSpace | None = None,
    iterations: int = 1000,
    seed: int = 0,
) -> tuple[TrialRecord, list[TrialRecord]]:
    """Evaluate `iterations` random parameter draws, maximizing ARI.

    The draw sequence comes from one deterministic generator seeded with
    `seed`, so identical calls reproduce identical histories. Trials that
    fail (for example a sampled n_neighbors too large for the dataset)
    score -inf instead of aborting the search. Returns the best trial
    (ties broken by the lower trial index) and the full history.
    """
    if space is None:
        space = SearchSpace()
    if iterations < 1:
        raise ConfigurationError(f"iterations must be positive, got {iterations}")
    space.validate()
    X = as_point_matrix(points)
    truth_arr = np.asarray(truth)
    if truth_arr.ndim != 1 or truth_arr.size != X.shape[0]:
        raise ConfigurationError(
            "ground-truth labels must be a flat sequence matching the point count"
        )

    rng = np.random.default_rng(seed)
    draws = [space.sample(rng) for _ in range(iterations)]

    history: list[TrialRecord] = []
    for index, params in enumerate(draws):
        try:
            result = fit(X, params)
            score = adjusted_rand_index(result.labels, truth_arr)
            ratio = result.outlier_ratio
        except (ConfigurationError, DataError, PipelineError):
            score = float("-inf")
            ratio = float("nan")
        history.append(
            TrialRecord(trial_index=index, params=params, ari=score, outlier_ratio=ratio)
        )

    best = max(history, key=lambda record: record.ari)
    return best, history
