from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from cellgt.data.sample import Sample
from cellgt.exceptions import GenerationError
from cellgt.utils import make_rng

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from cellgt.data.config import CorpusConfig

__all__ = (
    "generate_sample",
    "place_nuclei",
    "quantize_image",
    "render_mask",
)


def quantize_image(image: NDArray[np.float64]) -> NDArray[np.float64]:
    """Snap to multiples of 1/255 so 8-bit lossless storage is exact."""
    return np.round(np.clip(image, 0.0, 1.0) * 255.0) / 255.0


def place_nuclei(config: CorpusConfig, rng: np.random.Generator, count: int, seed: int) -> NDArray[np.float64]:
    """Rejection-sample ``count`` centroids at least ``d_min`` apart."""
    low_x, high_x = config.margin, config.width - config.margin
    low_y, high_y = config.margin, config.height - config.margin
    placed = np.zeros((count, 2))
    for i in range(count):
        for _ in range(config.max_retries):
            candidate = np.array([rng.uniform(low_x, high_x), rng.uniform(low_y, high_y)])
            if i == 0 or np.min(np.hypot(*(placed[:i] - candidate).T)) >= config.d_min:
                placed[i] = candidate
                break
        else:
            raise GenerationError(
                f"could not place nucleus {i + 1} of {count} after {config.max_retries} tries", seed=seed
            )
    return placed


def _assign_classes(config: CorpusConfig, rng: np.random.Generator, centroids: NDArray[np.float64]) -> NDArray[np.int64]:
    priors = np.asarray(config.class_priors) / np.sum(config.class_priors)
    labels = np.zeros(centroids.shape[0], dtype=np.int64)
    for i in range(centroids.shape[0]):
        if i > 0 and rng.random() < config.beta_cluster:
            distances = np.hypot(*(centroids[:i] - centroids[i]).T)
            labels[i] = labels[int(np.argmin(distances))]
        else:
            labels[i] = rng.choice(config.num_classes, p=priors)
    return labels


def _apply_label_noise(config: CorpusConfig, rng: np.random.Generator, labels: NDArray[np.int64]) -> NDArray[np.int64]:
    if config.label_noise == 0.0 or config.num_classes < 2:
        return labels
    noisy = labels.copy()
    for i in np.flatnonzero(rng.random(labels.shape[0]) < config.label_noise):
        shift = rng.integers(1, config.num_classes)
        noisy[i] = (labels[i] + shift) % config.num_classes
    return noisy


def render_mask(
    config: CorpusConfig,
    centroids: NDArray[np.float64],
    radii: NDArray[np.float64],
    labels: NDArray[np.int64],
) -> NDArray[np.int64]:
    """Stride-4 semantic map; each cell takes the class of the nearest covering blob, else background."""
    mask_h, mask_w = config.mask_shape
    mask = np.full((mask_h, mask_w), config.num_classes, dtype=np.int64)
    if centroids.shape[0] == 0:
        return mask
    cy, cx = np.mgrid[0:mask_h, 0:mask_w] * 4.0 + 2.0
    distances = np.hypot(cx[None] - centroids[:, 0, None, None], cy[None] - centroids[:, 1, None, None])
    nearest = np.argmin(distances, axis=0)
    covered = np.take_along_axis(distances, nearest[None], axis=0)[0] < radii[nearest]
    mask[covered] = labels[nearest[covered]]
    cells_x = np.minimum((centroids[:, 0] // 4).astype(np.intp), mask_w - 1)
    cells_y = np.minimum((centroids[:, 1] // 4).astype(np.intp), mask_h - 1)
    mask[cells_y, cells_x] = labels
    return mask


def _render_image(
    config: CorpusConfig,
    rng: np.random.Generator,
    centroids: NDArray[np.float64],
    radii: NDArray[np.float64],
    true_labels: NDArray[np.int64],
) -> NDArray[np.float64]:
    py, px = np.mgrid[0 : config.height, 0 : config.width] + 0.5
    image = np.broadcast_to(np.asarray(config.background)[:, None, None], (3, config.height, config.width)).copy()
    colors = np.asarray(config.class_colors)
    for (x, y), radius, label in zip(centroids, radii, true_labels, strict=True):
        color = colors[label] + rng.normal(0.0, config.appearance_std, size=3)
        alpha = 1.0 / (1.0 + np.exp(-(radius - np.hypot(px - x, py - y)) / config.softness))
        image = image * (1.0 - alpha) + color[:, None, None] * alpha
    image += rng.normal(0.0, config.noise_std, size=image.shape)
    return quantize_image(image)


def generate_sample(config: CorpusConfig, seed: int, sample_id: str | None = None) -> Sample:
    """One tile drawn from the stream ``(config.seed, seed)``; same inputs give an identical sample."""
    rng = make_rng(config.seed, seed)
    count = int(rng.integers(config.nuclei_min, config.nuclei_max + 1))
    centroids = place_nuclei(config, rng, count, seed)
    radii = rng.uniform(config.radius_min, config.radius_max, size=count)
    true_labels = _assign_classes(config, rng, centroids)
    image = _render_image(config, rng, centroids, radii, true_labels)
    labels = _apply_label_noise(config, rng, true_labels)
    mask = render_mask(config, centroids, radii, labels)
    return Sample(
        sample_id=sample_id if sample_id is not None else f"s{seed:05d}",
        image=image,
        centroids=centroids,
        labels=labels,
        mask=mask,
    )
