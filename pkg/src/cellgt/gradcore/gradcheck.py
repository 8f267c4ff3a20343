from __future__ import annotations

from collections.abc import Callable, Sequence
from typing import TYPE_CHECKING

import numpy as np

from cellgt.gradcore.tensor import Tape, Tensor

if TYPE_CHECKING:
    from numpy.typing import NDArray

__all__ = (
    "analytic_gradients",
    "gradient_relative_error",
    "numerical_gradient",
)


def analytic_gradients(loss_fn: Callable[[], Tensor], tensors: Sequence[Tensor]) -> list[NDArray[np.float64]]:
    for tensor in tensors:
        tensor.zero_grad()
    with Tape() as tape:
        loss = loss_fn()
    tape.backward(loss)
    return [t.grad.copy() if t.grad is not None else np.zeros(t.shape) for t in tensors]


def numerical_gradient(
    loss_fn: Callable[[], Tensor],
    tensor: Tensor,
    h: float = 1e-5,
    entries: Sequence[int] | None = None,
) -> NDArray[np.float64]:
    """Central differences of a scalar ``loss_fn`` w.r.t. ``tensor``.

    ``entries`` restricts the differences to some flat indices (others stay 0),
    used for spot checks on large parameter tensors.
    """
    grad = np.zeros(tensor.size)
    original = tensor.values
    flat_indices = range(tensor.size) if entries is None else entries
    try:
        for flat in flat_indices:
            shifted = original.copy().reshape(-1)
            shifted[flat] = original.reshape(-1)[flat] + h
            tensor.values = shifted.reshape(original.shape)
            upper = loss_fn().item()
            shifted[flat] = original.reshape(-1)[flat] - h
            tensor.values = shifted.reshape(original.shape)
            lower = loss_fn().item()
            grad[flat] = (upper - lower) / (2.0 * h)
    finally:
        tensor.values = original
    return grad.reshape(original.shape)


def gradient_relative_error(analytic: NDArray[np.float64], numeric: NDArray[np.float64]) -> float:
    """``|a - n| / (|a| + |n|)`` in the 2-norm, 0 when both vanish."""
    denominator = float(np.linalg.norm(analytic) + np.linalg.norm(numeric))
    if denominator == 0.0:
        return 0.0
    return float(np.linalg.norm(analytic - numeric)) / denominator
