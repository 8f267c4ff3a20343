from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import ContractError, EmptyGraphError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

__all__ = (
    "CellGraph",
    "build_knn_graph",
)


@dataclass(frozen=True, eq=False)
class CellGraph:
    """Directed k-NN edge list over nucleus centroids plus its symmetrised adjacency.

    ``edge_list[d] = (i, j)`` connects node ``i`` to its neighbour ``j``;
    edges are grouped by source node, neighbours in ascending distance.
    ``k`` is the effective neighbour count ``min(requested_k, n - 1)``.
    """

    centroids: NDArray[np.float64]
    k: int
    requested_k: int
    edge_list: NDArray[np.intp]
    adjacency: NDArray[np.float64]

    @property
    def n(self) -> int:
        return int(self.centroids.shape[0])

    @property
    def num_edges(self) -> int:
        return int(self.edge_list.shape[0])

    @property
    def degrees(self) -> NDArray[np.float64]:
        return self.adjacency.sum(axis=1)

    @property
    def degree_matrix(self) -> NDArray[np.float64]:
        return np.diag(self.degrees)

    def neighbours(self, node: int) -> list[int]:
        return [int(j) for j in np.flatnonzero(self.adjacency[node])]


def build_knn_graph(centroids: Sequence[tuple[float, float]] | ArrayLike, k: int) -> CellGraph:
    points = np.asarray(centroids, dtype=np.float64).reshape(-1, 2)
    n = points.shape[0]
    if n == 0:
        raise EmptyGraphError("cannot build a cell graph from zero centroids")
    if not np.all(np.isfinite(points)):
        raise ContractError("centroid coordinates must be finite")
    if k < 1:
        raise ContractError(f"k must be >= 1, got {k}")

    k_eff = min(k, n - 1)
    deltas = points[:, None, :] - points[None, :, :]
    sq_dist = (deltas * deltas).sum(axis=-1)
    candidates = np.arange(n)

    edges = np.empty((n * k_eff, 2), dtype=np.intp)
    for i in range(n):
        others = candidates[candidates != i]
        # distance first, lower index breaks ties
        order = np.lexsort((others, sq_dist[i, others]))
        chosen = others[order[:k_eff]]
        edges[i * k_eff : (i + 1) * k_eff, 0] = i
        edges[i * k_eff : (i + 1) * k_eff, 1] = chosen

    adjacency = np.zeros((n, n), dtype=np.float64)
    if edges.size:
        adjacency[edges[:, 0], edges[:, 1]] = 1.0
        adjacency[edges[:, 1], edges[:, 0]] = 1.0

    return CellGraph(centroids=points, k=k_eff, requested_k=k, edge_list=edges, adjacency=adjacency)
