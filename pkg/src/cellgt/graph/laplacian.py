from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
import scipy.linalg

from cellgt.exceptions import ContractError, NumericError

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from cellgt.graph.cell_graph import CellGraph

__all__ = (
    "LinkMarkers",
    "canonicalize_signs",
    "laplacian_markers",
    "link_markers",
    "normalized_laplacian",
)

_TIE_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class LinkMarkers:
    """Per-node link markers ``markers[i] = m_i`` and the full spectrum they came from."""

    markers: NDArray[np.float64]
    eigenvalues: NDArray[np.float64]
    eigenvectors: NDArray[np.float64]

    @property
    def dim(self) -> int:
        return int(self.markers.shape[1])

    @classmethod
    def empty(cls, n: int) -> LinkMarkers:
        """Zero-width markers for ``n`` nodes, with no spectrum computed."""
        return cls(markers=np.zeros((n, 0)), eigenvalues=np.zeros(0), eigenvectors=np.zeros((n, 0)))


def normalized_laplacian(graph: CellGraph) -> NDArray[np.float64]:
    """``I - Θ^{-1/2} A Θ^{-1/2}``; isolated nodes get ``Θ^{-1/2}_ii = 0``."""
    degrees = graph.degrees
    inv_sqrt = np.zeros_like(degrees)
    positive = degrees > 0
    inv_sqrt[positive] = 1.0 / np.sqrt(degrees[positive])
    laplacian = np.eye(graph.n) - inv_sqrt[:, None] * graph.adjacency * inv_sqrt[None, :]
    return (laplacian + laplacian.T) / 2.0


def canonicalize_signs(vectors: NDArray[np.float64]) -> NDArray[np.float64]:
    """Flip each column so its largest-magnitude entry (lowest index on ties) is positive."""
    out = vectors.copy()
    for col in range(out.shape[1]):
        magnitude = np.abs(out[:, col])
        if magnitude.size == 0:
            continue
        pivot = int(np.flatnonzero(magnitude >= magnitude.max() - _TIE_TOLERANCE)[0])
        if out[pivot, col] < 0:
            out[:, col] = -out[:, col]
    return out


def link_markers(laplacian: NDArray[np.float64], c_l: int, *, skip_trivial: bool = True) -> LinkMarkers:
    """Eigen-decompose a symmetric Laplacian and cut out ``c_l`` marker dimensions.

    Eigenvalues ascend; with ``skip_trivial`` the first eigenvector is
    dropped. Missing dimensions (``n - 1 < c_l``) are zero-padded on the
    right. ``skip_trivial=False`` with ``c_l = n`` returns the full basis.
    """
    if c_l < 0:
        raise ContractError(f"c_l must be >= 0, got {c_l}")
    matrix = np.asarray(laplacian, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ContractError(f"laplacian must be square, got shape {matrix.shape}")
    if not np.allclose(matrix, matrix.T, atol=1e-12):
        raise ContractError("laplacian must be symmetric")

    try:
        eigenvalues, eigenvectors = scipy.linalg.eigh(matrix, driver="ev")
    except np.linalg.LinAlgError as exc:
        raise NumericError("symmetric eigensolver did not converge", detail=str(exc)) from exc
    if not (np.all(np.isfinite(eigenvalues)) and np.all(np.isfinite(eigenvectors))):
        raise NumericError("symmetric eigensolver returned non-finite values")

    eigenvectors = canonicalize_signs(eigenvectors)
    start = 1 if skip_trivial else 0
    selected = eigenvectors[:, start : start + c_l]
    markers = np.zeros((matrix.shape[0], c_l))
    markers[:, : selected.shape[1]] = selected
    return LinkMarkers(markers=markers, eigenvalues=eigenvalues, eigenvectors=eigenvectors)


def laplacian_markers(graph: CellGraph, c_l: int) -> LinkMarkers:
    """Link markers of ``graph`` with the trivial eigenvector skipped."""
    return link_markers(normalized_laplacian(graph), c_l)
