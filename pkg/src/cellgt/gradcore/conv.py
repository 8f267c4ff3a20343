from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from cellgt.exceptions import ConfigurationError, DimensionError
from cellgt.gradcore.ops import _result
from cellgt.gradcore.tensor import Tensor

if TYPE_CHECKING:
    from numpy.typing import NDArray

__all__ = (
    "conv2d",
    "conv_output_size",
    "max_pool2d",
    "upsample_nearest2d",
)


def conv_output_size(size: int, kernel: int, stride: int, pad: int) -> int:
    """Floor convention: ``(size + 2*pad - kernel) // stride + 1``."""
    if stride < 1:
        raise ConfigurationError(f"stride must be >= 1, got {stride}", field="stride")
    span = size + 2 * pad - kernel
    if span < 0:
        raise ConfigurationError(f"kernel {kernel} does not fit input {size} with padding {pad}", field="kernel")
    return span // stride + 1


def conv2d(x: Tensor, kernels: Tensor, stride: int = 1, pad: int = 0) -> Tensor:
    """Zero-padded cross-correlation of a (C_in, H, W) map with (C_out, C_in, kh, kw) kernels."""
    if x.ndim != 3 or kernels.ndim != 4 or kernels.shape[1] != x.shape[0]:
        raise DimensionError("conv2d", x.shape, kernels.shape)
    c_out, c_in, kh, kw = kernels.shape
    if kh % 2 == 0 or kw % 2 == 0:
        raise ConfigurationError(f"kernel sides must be odd, got {kh}x{kw}", field="kernel")
    _, height, width = x.shape
    out_h = conv_output_size(height, kh, stride, pad)
    out_w = conv_output_size(width, kw, stride, pad)

    padded = np.pad(x.values, ((0, 0), (pad, pad), (pad, pad)))
    windows = sliding_window_view(padded, (kh, kw), axis=(1, 2))[:, ::stride, ::stride][:, :out_h, :out_w]
    out = np.tensordot(windows, kernels.values, axes=([0, 3, 4], [1, 2, 3])).transpose(2, 0, 1)

    def rule(g: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        d_kernels = np.tensordot(g, windows, axes=([1, 2], [1, 2]))
        d_cols = np.tensordot(kernels.values, g, axes=([0], [0]))  # (C_in, kh, kw, out_h, out_w)
        d_padded = np.zeros_like(padded)
        for i in range(kh):
            for j in range(kw):
                d_padded[:, i : i + stride * out_h : stride, j : j + stride * out_w : stride] += d_cols[:, i, j]
        return d_padded[:, pad : pad + height, pad : pad + width], d_kernels

    return _result(np.ascontiguousarray(out), (x, kernels), rule)


def max_pool2d(x: Tensor, size: int = 2) -> Tensor:
    """Non-overlapping max pooling; odd borders are padded (ceil mode)."""
    if x.ndim != 3:
        raise DimensionError("max_pool2d", x.shape)
    channels, height, width = x.shape
    out_h, out_w = -(-height // size), -(-width // size)
    padded = np.full((channels, out_h * size, out_w * size), -np.inf)
    padded[:, :height, :width] = x.values
    blocks = padded.reshape(channels, out_h, size, out_w, size).transpose(0, 1, 3, 2, 4).reshape(
        channels, out_h, out_w, size * size
    )
    # ties go to the first maximum
    arg = blocks.argmax(axis=-1)[..., None]
    out = np.take_along_axis(blocks, arg, axis=-1)[..., 0]

    def rule(g: NDArray[np.float64]) -> tuple[NDArray[np.float64]]:
        d_blocks = np.zeros_like(blocks)
        np.put_along_axis(d_blocks, arg, g[..., None], axis=-1)
        d_padded = d_blocks.reshape(channels, out_h, out_w, size, size).transpose(0, 1, 3, 2, 4)
        return (d_padded.reshape(channels, out_h * size, out_w * size)[:, :height, :width],)

    return _result(out, (x,), rule)


def upsample_nearest2d(x: Tensor, factor: int = 2, size: tuple[int, int] | None = None) -> Tensor:
    """Nearest-neighbour upsampling; ``size`` crops the result to a target (H, W)."""
    if x.ndim != 3:
        raise DimensionError("upsample_nearest2d", x.shape)
    channels, height, width = x.shape
    target_h, target_w = size if size is not None else (height * factor, width * factor)
    if target_h > height * factor or target_w > width * factor:
        raise DimensionError("upsample_nearest2d", x.shape, (channels, target_h, target_w))
    full = x.values.repeat(factor, axis=1).repeat(factor, axis=2)

    def rule(g: NDArray[np.float64]) -> tuple[NDArray[np.float64]]:
        d_full = np.zeros_like(full)
        d_full[:, :target_h, :target_w] = g
        return (d_full.reshape(channels, height, factor, width, factor).sum(axis=(2, 4)),)

    return _result(full[:, :target_h, :target_w].copy(), (x,), rule)
