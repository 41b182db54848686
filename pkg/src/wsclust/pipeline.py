"""End-to-end clustering: graph, density, division, agglomeration, labels."""

import math
from dataclasses import dataclass, fields, replace

import numpy as np

from .density import KERNELS, derive_thresholds, estimate_density, locate_extrema
from .errors import ConfigurationError, PipelineError
from .graph import build_knn_graph, minimum_spanning_forest
from .metrics import METRICS, as_point_matrix
from .partition import agglomerate, divide

AGGLOMERATION_MODES = ("single_pass", "fixpoint")


@dataclass(frozen=True)
class ClusteringParams:
    """Hyperparameters for one clustering run.

    seed does not influence the (fully deterministic) pipeline; it is an
    audit tag echoed into reports so any run can be tied to its tuning
    trial.
    """

    n_neighbors: int
    bandwidth: float
    distance_threshold: float
    wasserstein_threshold: float
    metric: str = "euclidean"
    kernel: str = "gaussian"
    grid_size: int = 1024
    min_cluster_size: int = 3
    agglomeration_mode: str = "single_pass"
    seed: int = 0

    def validate(self, point_count: int | None = None) -> None:
        if not isinstance(self.n_neighbors, (int, np.integer)) or isinstance(
            self.n_neighbors, bool
        ):
            raise ConfigurationError("n_neighbors must be an integer")
        if self.n_neighbors < 1:
            raise ConfigurationError(
                f"n_neighbors must be positive, got {self.n_neighbors}"
            )
        if point_count is not None and self.n_neighbors > point_count - 1:
            raise ConfigurationError(
                f"n_neighbors must be at most {point_count - 1} for "
                f"{point_count} points, got {self.n_neighbors}"
            )
        if not (self.bandwidth > 0.0 and math.isfinite(self.bandwidth)):
            raise ConfigurationError(f"bandwidth must be positive, got {self.bandwidth}")
        if not (self.distance_threshold > 0.0):
            raise ConfigurationError(
                f"distance threshold must be positive, got {self.distance_threshold}"
            )
        if self.wasserstein_threshold < 0.0 or math.isnan(self.wasserstein_threshold):
            raise ConfigurationError(
                "wasserstein threshold must be non-negative, got "
                f"{self.wasserstein_threshold}"
            )
        if self.metric not in METRICS:
            raise ConfigurationError(f"unknown metric {self.metric!r}")
        if self.kernel not in KERNELS:
            raise ConfigurationError(f"unknown kernel {self.kernel!r}")
        if self.grid_size < 16:
            raise ConfigurationError(
                f"grid_size must be at least 16, got {self.grid_size}"
            )
        if self.min_cluster_size < 1:
            raise ConfigurationError(
                f"min_cluster_size must be positive, got {self.min_cluster_size}"
            )
        if self.agglomeration_mode not in AGGLOMERATION_MODES:
            raise ConfigurationError(
                f"unknown agglomeration mode {self.agglomeration_mode!r}"
            )

    def with_overrides(self, **overrides) -> "ClusteringParams":
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigurationError(
                f"unknown parameter overrides: {', '.join(sorted(unknown))}"
            )
        return replace(self, **overrides)


@dataclass(frozen=True)
class Diagnostics:
    thresholds: tuple[float, ...]
    extrema_count: int
    subclusters_before_merge: int
    subclusters_after_merge: int
    merge_count: int
    forest_component_count: int


@dataclass(frozen=True)
class ClusteringResult:
    """Final labels (cluster ids from 0, outliers -1) plus run diagnostics."""

    labels: np.ndarray
    cluster_count: int
    outlier_ratio: float
    diagnostics: Diagnostics


def fit(points, params: ClusteringParams) -> ClusteringResult:
    """Run the full clustering pipeline on a point matrix.

    Stages: k-nearest-neighbor graph, Kruskal spanning forest, kernel
    density estimate over the forest's edge distances, mid-distance
    thresholds, forest division, sub-cluster agglomeration. Final
    clusters smaller than min_cluster_size become outliers (-1);
    surviving clusters are renumbered densely from 0 in order of their
    first member.
    """
    X = as_point_matrix(points)
    n = X.shape[0]
    if n < 2:
        raise PipelineError(f"clustering needs at least 2 points, got {n}")
    params.validate(point_count=n)

    graph = build_knn_graph(X, params.n_neighbors, params.metric)
    forest = minimum_spanning_forest(graph)
    curve = estimate_density(
        forest.w, params.bandwidth, params.kernel, params.grid_size
    )
    extrema = locate_extrema(curve)
    thresholds = derive_thresholds(extrema)
    divided = divide(forest, thresholds)
    merged = agglomerate(
        divided,
        forest,
        params.distance_threshold,
        params.wasserstein_threshold,
        params.agglomeration_mode,
    )

    labels = np.full(n, -1, dtype=np.int64)
    surviving = [
        sc for sc in merged.subclusters.values() if sc.size >= params.min_cluster_size
    ]
    surviving.sort(key=lambda sc: int(sc.members[0]))
    for new_id, sc in enumerate(surviving):
        labels[sc.members] = new_id

    outliers = int(np.count_nonzero(labels == -1))
    diagnostics = Diagnostics(
        thresholds=tuple(float(t) for t in thresholds),
        extrema_count=len(extrema),
        subclusters_before_merge=divided.cluster_count,
        subclusters_after_merge=merged.cluster_count,
        merge_count=divided.cluster_count - merged.cluster_count,
        forest_component_count=forest.component_count,
    )
    return ClusteringResult(
        labels=labels,
        cluster_count=len(surviving),
        outlier_ratio=outliers / n,
        diagnostics=diagnostics,
    )
