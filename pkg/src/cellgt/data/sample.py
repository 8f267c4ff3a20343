from __future__ import annotations

from dataclasses import dataclass, replace
from typing import TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:
    from numpy.typing import NDArray

__all__ = (
    "Sample",
    "flip_sample",
)


@dataclass(frozen=True, eq=False)
class Sample:
    """One synthetic tile.

    ``image`` is (3, H, W) in [0, 1]; ``centroids`` (n, 2) holds (x, y) pixel
    coordinates; ``labels`` (n,) class ids; ``mask`` is the (H/4, W/4)
    semantic map with background encoded as ``num_classes``.
    """

    sample_id: str
    image: NDArray[np.float64]
    centroids: NDArray[np.float64]
    labels: NDArray[np.int64]
    mask: NDArray[np.int64]

    @property
    def height(self) -> int:
        return int(self.image.shape[1])

    @property
    def width(self) -> int:
        return int(self.image.shape[2])

    @property
    def num_nuclei(self) -> int:
        return int(self.centroids.shape[0])

    def same_as(self, other: Sample) -> bool:
        return (
            self.sample_id == other.sample_id
            and np.array_equal(self.image, other.image)
            and np.array_equal(self.centroids, other.centroids)
            and np.array_equal(self.labels, other.labels)
            and np.array_equal(self.mask, other.mask)
        )


def flip_sample(sample: Sample, *, horizontal: bool = False, vertical: bool = False) -> Sample:
    """Mirror image, mask and centroids together (``x -> W - x``, ``y -> H - y``)."""
    image, mask, centroids = sample.image, sample.mask, sample.centroids.copy()
    if horizontal:
        image, mask = image[:, :, ::-1], mask[:, ::-1]
        centroids[:, 0] = sample.width - centroids[:, 0]
    if vertical:
        image, mask = image[:, ::-1, :], mask[::-1, :]
        centroids[:, 1] = sample.height - centroids[:, 1]
    return replace(
        sample,
        image=np.ascontiguousarray(image),
        mask=np.ascontiguousarray(mask),
        centroids=centroids,
    )
