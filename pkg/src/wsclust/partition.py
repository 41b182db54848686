"""Forest division into sub-clusters and Wasserstein-guided agglomeration."""

import math
from dataclasses import dataclass

import numpy as np

from ._accel import USING_NUMBA, njit
from .errors import ConfigurationError
from .graph import SpanningForest, UnionFind


@dataclass(frozen=True)
class SubCluster:
    """A group of nodes plus the multiset of edge distances inside it."""

    id: int
    members: np.ndarray  # sorted node indices
    intra_distances: np.ndarray  # sorted ascending

    @property
    def size(self) -> int:
        return int(self.members.size)


@dataclass(frozen=True)
class PartitionState:
    """Hard partition: every node belongs to exactly one sub-cluster."""

    assignment: np.ndarray  # node index -> sub-cluster id
    subclusters: dict[int, SubCluster]

    @property
    def cluster_count(self) -> int:
        return len(self.subclusters)


def _components_to_state(node_count, intra_u, intra_v, intra_w) -> PartitionState:
    """Connected components over intra edges; ids dense by first member."""
    uf = UnionFind(node_count)
    for a, b in zip(intra_u, intra_v):
        uf.union(int(a), int(b))
    roots = np.fromiter(
        (uf.find(i) for i in range(node_count)), dtype=np.int64, count=node_count
    )
    ids: dict[int, int] = {}
    assignment = np.empty(node_count, dtype=np.int64)
    for node in range(node_count):
        root = int(roots[node])
        if root not in ids:
            ids[root] = len(ids)
        assignment[node] = ids[root]

    member_lists: list[list[int]] = [[] for _ in range(len(ids))]
    for node in range(node_count):
        member_lists[assignment[node]].append(node)
    weight_lists: list[list[float]] = [[] for _ in range(len(ids))]
    for a, weight in zip(intra_u, intra_w):
        weight_lists[assignment[int(a)]].append(float(weight))

    subclusters = {
        cid: SubCluster(
            id=cid,
            members=np.asarray(member_lists[cid], dtype=np.int64),
            intra_distances=np.sort(np.asarray(weight_lists[cid], dtype=np.float64)),
        )
        for cid in range(len(ids))
    }
    return PartitionState(assignment=assignment, subclusters=subclusters)


def divide(forest: SpanningForest, thresholds) -> PartitionState:
    """Split the forest into sub-clusters by descending thresholds.

    Conceptually each threshold t extracts, from the shrinking residual
    graph, the components of nodes whose every remaining edge weighs more
    than t; edges at most t and their endpoints carry over, and whatever
    survives the last threshold forms the final sub-clusters. Because an
    edge leaves the residual exactly when the threshold first drops below
    its weight, the outcome reduces to a per-edge rule: an edge is
    intra-cluster iff both endpoints' minimum incident weight exceeds the
    largest threshold below the edge's own weight (or no threshold lies
    below it). Components over intra edges give the partition.
    """
    t = np.asarray(thresholds, dtype=np.float64)
    if t.ndim != 1:
        raise ConfigurationError("thresholds must be a flat sequence")
    if t.size > 1 and not np.all(np.diff(t) < 0.0):
        raise ConfigurationError("thresholds must be strictly descending")

    n = forest.node_count
    u, v, w = forest.u, forest.v, forest.w
    if t.size == 0 or w.size == 0:
        intra = np.ones(w.size, dtype=bool)
    else:
        ascending = t[::-1]
        below = np.searchsorted(ascending, w, side="left")
        has_band = below > 0
        tau = ascending[np.maximum(below, 1) - 1]
        minw = np.full(n, np.inf)
        np.minimum.at(minw, u, w)
        np.minimum.at(minw, v, w)
        intra = ~has_band | ((minw[u] > tau) & (minw[v] > tau))

    keep = np.flatnonzero(intra)
    return _components_to_state(n, u[keep], v[keep], w[keep])


# ---------------------------------------------------------------------------
# first Wasserstein distance between empirical distributions
# ---------------------------------------------------------------------------


def _wasserstein_sorted_np(a, b):
    merged = np.concatenate((a, b))
    merged.sort(kind="mergesort")
    deltas = np.diff(merged)
    if deltas.size == 0:
        return 0.0
    cdf_a = np.searchsorted(a, merged[:-1], side="right") / a.size
    cdf_b = np.searchsorted(b, merged[:-1], side="right") / b.size
    return float(np.sum(np.abs(cdf_a - cdf_b) * deltas))


@njit(cache=True)
def _wasserstein_sorted_nb(a, b):
    na, nb = a.size, b.size
    inv_a = 1.0 / na
    inv_b = 1.0 / nb
    i = 0
    j = 0
    cdf_a = 0.0
    cdf_b = 0.0
    total = 0.0
    prev = 0.0
    started = False
    while i < na or j < nb:
        if j >= nb or (i < na and a[i] <= b[j]):
            x = a[i]
        else:
            x = b[j]
        if started:
            total += abs(cdf_a - cdf_b) * (x - prev)
        while i < na and a[i] == x:
            cdf_a += inv_a
            i += 1
        while j < nb and b[j] == x:
            cdf_b += inv_b
            j += 1
        prev = x
        started = True
    return total


_ws_sorted = _wasserstein_sorted_nb if USING_NUMBA else _wasserstein_sorted_np


def _ws_pair(a_sorted: np.ndarray, b_sorted: np.ndarray) -> float:
    if a_sorted.size == 0 or b_sorted.size == 0:
        return 0.0
    return float(_ws_sorted(a_sorted, b_sorted))


def wasserstein1(a, b) -> float:
    """Exact first Wasserstein distance between two empirical multisets.

    Equals the integral over quantile levels of the absolute difference
    of the two quantile functions. An empty multiset is treated as
    vacuously similar to anything (distance 0), so sub-clusters with no
    internal distances merge on the spatial condition alone.
    """
    av = np.sort(np.asarray(a, dtype=np.float64).ravel())
    bv = np.sort(np.asarray(b, dtype=np.float64).ravel())
    return _ws_pair(av, bv)


def agglomerate(
    state: PartitionState,
    forest: SpanningForest,
    distance_threshold: float,
    wasserstein_threshold: float,
    mode: str = "single_pass",
) -> PartitionState:
    """Merge sub-clusters linked by a short forest edge with similar densities.

    Forest edges are traversed in ascending (w, u, v) order. An edge whose
    endpoints sit in different sub-clusters merges them when its weight is
    at most distance_threshold and the Wasserstein distance between their
    intra-distance multisets is at most wasserstein_threshold. A merge
    unions members and distances (the linking edge's weight is not added)
    and keeps the smaller id; later tests in the same traversal see the
    updated multisets. In fixpoint mode traversals repeat until one full
    pass performs no merge; single_pass stops after one traversal.
    """
    if not (distance_threshold > 0.0):
        raise ConfigurationError(
            f"distance threshold must be positive, got {distance_threshold}"
        )
    if wasserstein_threshold < 0.0 or math.isnan(wasserstein_threshold):
        raise ConfigurationError(
            f"wasserstein threshold must be non-negative, got {wasserstein_threshold}"
        )
    if mode not in ("single_pass", "fixpoint"):
        raise ConfigurationError(f"unknown agglomeration mode {mode!r}")
    n = forest.node_count
    if state.assignment.shape != (n,):
        raise ConfigurationError("partition does not cover the forest's nodes")

    assignment = state.assignment.copy()
    clusters = dict(state.subclusters)

    order = np.lexsort((forest.v, forest.u, forest.w))
    eu = forest.u[order]
    ev = forest.v[order]
    ew = forest.w[order]

    while True:
        merges = 0
        for i in range(ew.size):
            weight = ew[i]
            if weight > distance_threshold:
                break  # ascending order: every later edge fails the spatial test
            ca = int(assignment[eu[i]])
            cb = int(assignment[ev[i]])
            if ca == cb:
                continue
            first = clusters[ca]
            second = clusters[cb]
            if (
                _ws_pair(first.intra_distances, second.intra_distances)
                > wasserstein_threshold
            ):
                continue
            keep, drop = (first, second) if ca < cb else (second, first)
            merged = SubCluster(
                id=keep.id,
                members=np.sort(np.concatenate((keep.members, drop.members))),
                intra_distances=np.sort(
                    np.concatenate((keep.intra_distances, drop.intra_distances))
                ),
            )
            assignment[drop.members] = keep.id
            clusters[keep.id] = merged
            del clusters[drop.id]
            merges += 1
        if mode == "single_pass" or merges == 0:
            break
    return PartitionState(assignment=assignment, subclusters=clusters)
