from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import ConfigurationError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

__all__ = (
    "positional_table",
    "sinusoidal_pe",
)


def _axis_code(values: NDArray[np.float64], dim: int) -> NDArray[np.float64]:
    t = np.arange(dim // 2)
    angles = values[:, None] / np.power(10000.0, 2.0 * t / dim)[None, :]
    code = np.empty((values.shape[0], dim))
    code[:, 0::2] = np.sin(angles)
    code[:, 1::2] = np.cos(angles)
    return code


def positional_table(points: ArrayLike, channels: int) -> NDArray[np.float64]:
    """Row ``i`` is ``sinusoidal_pe(points[i], channels)``."""
    if channels <= 0 or channels % 4:
        raise ConfigurationError(f"positional width must be a positive multiple of 4, got {channels}", field="channels")
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    half = channels // 2
    return np.concatenate([_axis_code(pts[:, 0], half), _axis_code(pts[:, 1], half)], axis=1)


def sinusoidal_pe(point: tuple[float, float], channels: int) -> NDArray[np.float64]:
    """x code in the first half, y code in the second; pairs are (sin, cos)."""
    return positional_table([point], channels)[0]
