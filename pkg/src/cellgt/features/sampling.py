from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from cellgt.features.positional import positional_table
from cellgt.gradcore import Tensor, add, concat, mul, reshape, take_rows, transpose

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from cellgt.features.backbone import FeatureMap

__all__ = (
    "FEATURE_STRIDE",
    "bilinear_sample",
    "bilinear_sample_many",
    "bilinear_weights",
    "edge_midpoint",
    "edge_features",
    "edge_midpoints",
    "node_features",
)

FEATURE_STRIDE = 4


def bilinear_weights(
    points: ArrayLike, height: int, width: int
) -> tuple[NDArray[np.intp], NDArray[np.float64]]:
    """Row indices into the flattened (h*w) grid and blend weights, both (N, 4).

    Corner order: (x0, y0), (x1, y0), (x0, y1), (x1, y1).
    """
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    gx = np.clip(pts[:, 0] / FEATURE_STRIDE, 0.0, width - 1)
    gy = np.clip(pts[:, 1] / FEATURE_STRIDE, 0.0, height - 1)
    x0 = np.floor(gx).astype(np.intp)
    y0 = np.floor(gy).astype(np.intp)
    x1 = np.minimum(x0 + 1, width - 1)
    y1 = np.minimum(y0 + 1, height - 1)
    fx = gx - x0
    fy = gy - y0
    rows = np.stack([y0 * width + x0, y0 * width + x1, y1 * width + x0, y1 * width + x1], axis=1)
    weights = np.stack([(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy], axis=1)
    return rows, weights


def bilinear_sample_many(f: FeatureMap, points: ArrayLike) -> Tensor:
    """Sample ``f`` at input-pixel coordinates ``points`` (N, 2) -> (N, C)."""
    rows, weights = bilinear_weights(points, f.height, f.width)
    grid = transpose(reshape(f.values, (f.channels, f.height * f.width)))
    out: Tensor | None = None
    for corner in range(4):
        term = mul(take_rows(grid, rows[:, corner]), weights[:, corner : corner + 1])
        out = term if out is None else add(out, term)
    assert out is not None
    return out


def bilinear_sample(f: FeatureMap, point: tuple[float, float]) -> Tensor:
    return reshape(bilinear_sample_many(f, [point]), (f.channels,))


def edge_midpoint(ci: tuple[float, float], cj: tuple[float, float]) -> tuple[float, float]:
    return ((ci[0] + cj[0]) / 2.0, (ci[1] + cj[1]) / 2.0)


def edge_midpoints(centroids: NDArray[np.float64], edge_list: NDArray[np.intp]) -> NDArray[np.float64]:
    if edge_list.size == 0:
        return np.zeros((0, 2))
    return (centroids[edge_list[:, 0]] + centroids[edge_list[:, 1]]) / 2.0


def node_features(f: FeatureMap, centroids: NDArray[np.float64]) -> Tensor:
    """``[z_i ‖ ρ_i]`` per node: the centroid sample next to its positional code."""
    return concat([bilinear_sample_many(f, centroids), Tensor(positional_table(centroids, f.channels))], axis=-1)


def edge_features(f: FeatureMap, centroids: NDArray[np.float64], edge_list: NDArray[np.intp]) -> Tensor:
    """Feature sampled at each edge's midpoint; edges carry no positional code."""
    return bilinear_sample_many(f, edge_midpoints(centroids, edge_list))
