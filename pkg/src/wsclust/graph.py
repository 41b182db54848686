"""k-nearest-neighbor graphs and their Kruskal minimum spanning forests."""

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .errors import ConfigurationError
from .metrics import as_point_matrix, pairwise_distances


class WeightedEdge(NamedTuple):
    u: int
    v: int
    w: float


@dataclass(frozen=True)
class NeighborGraph:
    """Undirected weighted graph; edges stored canonically with u < v."""

    node_count: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(self.w.size)

    def edges(self) -> Iterator[WeightedEdge]:
        for a, b, weight in zip(self.u, self.v, self.w):
            yield WeightedEdge(int(a), int(b), float(weight))


@dataclass(frozen=True)
class SpanningForest:
    """Cycle-free minimum-weight subgraph, one tree per component.

    Edges are kept in the deterministic Kruskal acceptance order:
    ascending (w, u, v). component_ids maps each node to a component
    index that is dense from 0 in order of first node occurrence.
    """

    node_count: int
    u: np.ndarray
    v: np.ndarray
    w: np.ndarray
    component_ids: np.ndarray

    @property
    def edge_count(self) -> int:
        return int(self.w.size)

    @property
    def component_count(self) -> int:
        return int(self.component_ids.max()) + 1 if self.node_count else 0

    @property
    def total_weight(self) -> float:
        return float(self.w.sum())

    def edges(self) -> Iterator[WeightedEdge]:
        for a, b, weight in zip(self.u, self.v, self.w):
            yield WeightedEdge(int(a), int(b), float(weight))


class UnionFind:
    """Disjoint-set forest with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = np.arange(n, dtype=np.int64)
        self.size = np.ones(n, dtype=np.int64)

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return int(x)

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


def build_knn_graph(points, k: int, metric: str = "euclidean") -> NeighborGraph:
    """Union-symmetrized k-nearest-neighbor graph.

    An edge (u, v) exists when v is among u's k nearest neighbors or u is
    among v's. Ties at the k-th distance resolve to the smaller node
    index, so builds are deterministic.
    """
    X = as_point_matrix(points)
    n = X.shape[0]
    if n < 2:
        raise ConfigurationError("a neighbor graph needs at least 2 points")
    if not isinstance(k, (int, np.integer)) or isinstance(k, bool):
        raise ConfigurationError(f"k must be an integer, got {k!r}")
    if not 1 <= k <= n - 1:
        raise ConfigurationError(f"k must be in [1, {n - 1}] for {n} points, got {k}")

    dist = pairwise_distances(X, metric)
    np.fill_diagonal(dist, np.inf)
    # stable argsort == sort by (distance, node index)
    order = np.argsort(dist, axis=1, kind="stable")
    neighbors = order[:, :k]
    np.fill_diagonal(dist, 0.0)

    rows = np.repeat(np.arange(n, dtype=np.int64), k)
    cols = neighbors.ravel().astype(np.int64)
    lo = np.minimum(rows, cols)
    hi = np.maximum(rows, cols)
    keys = np.unique(lo * n + hi)
    u = keys // n
    v = keys % n
    return NeighborGraph(node_count=n, u=u, v=v, w=dist[u, v])


def minimum_spanning_forest(graph: NeighborGraph) -> SpanningForest:
    """Kruskal over edges sorted by (w, u, v); spans every component."""
    n = graph.node_count
    order = np.lexsort((graph.v, graph.u, graph.w))
    uf = UnionFind(n)
    kept = []
    remaining = n - 1
    for idx in order:
        if uf.union(int(graph.u[idx]), int(graph.v[idx])):
            kept.append(idx)
            remaining -= 1
            if remaining == 0:
                break
    kept_idx = np.asarray(kept, dtype=np.int64)

    roots = np.fromiter((uf.find(i) for i in range(n)), dtype=np.int64, count=n)
    component_ids = np.empty(n, dtype=np.int64)
    seen: dict[int, int] = {}
    for node in range(n):
        root = int(roots[node])
        if root not in seen:
            seen[root] = len(seen)
        component_ids[node] = seen[root]

    return SpanningForest(
        node_count=n,
        u=graph.u[kept_idx],
        v=graph.v[kept_idx],
        w=graph.w[kept_idx],
        component_ids=component_ids,
    )
