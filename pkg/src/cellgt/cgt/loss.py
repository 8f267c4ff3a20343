from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import ContractError, DimensionError
from cellgt.gradcore import Tensor, add, clip, log, mean, mul, neg, ops, power, sub

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

__all__ = (
    "PROBABILITY_FLOOR",
    "class_weights",
    "node_loss",
    "one_hot",
)

PROBABILITY_FLOOR = 1e-12


def one_hot(labels: ArrayLike, num_classes: int) -> NDArray[np.float64]:
    ids = np.asarray(labels, dtype=np.intp).reshape(-1)
    if ids.size and (ids.min() < 0 or ids.max() >= num_classes):
        raise ContractError(f"class ids must lie in [0, {num_classes}), got {ids.min()}..{ids.max()}")
    out = np.zeros((ids.size, num_classes))
    out[np.arange(ids.size), ids] = 1.0
    return out


def class_weights(counts: ArrayLike) -> NDArray[np.float64]:
    """Inverse class frequency scaled so the most frequent class gets 1; absent classes get 1."""
    freq = np.asarray(counts, dtype=np.float64)
    weights = np.ones_like(freq)
    present = freq > 0
    if present.any():
        weights[present] = freq[present].max() / freq[present]
    return weights


def node_loss(probs: Tensor, targets: ArrayLike, tau: ArrayLike, gamma: float = 2.0) -> Tensor:
    """Mean over nodes of ``-Σ_b y_b log P_b - Σ_b τ_b (1 - P_b)^γ y_b log P_b``.

    Probabilities are clamped to ``[1e-12, 1]`` before the log.
    """
    y = np.asarray(targets, dtype=np.float64)
    weights = np.asarray(tau, dtype=np.float64).reshape(-1)
    if y.shape != probs.shape or probs.ndim != 2:
        raise DimensionError("node_loss", probs.shape, y.shape)
    if weights.shape != (probs.shape[1],):
        raise DimensionError("node_loss", probs.shape, weights.shape)
    if probs.shape[0] == 0:
        raise ContractError("node_loss needs at least one node")
    if not (np.all((y == 0.0) | (y == 1.0)) and np.all(y.sum(axis=1) == 1.0)):
        raise ContractError("targets must be one-hot rows")

    p = clip(probs, PROBABILITY_FLOOR, 1.0)
    log_p = log(p)
    if gamma == 0.0:
        focal = Tensor(np.broadcast_to(weights, probs.shape))
    else:
        focal = mul(power(sub(1.0, p), gamma), weights)
    per_entry = mul(mul(log_p, y), add(focal, 1.0))
    return neg(mean(ops.sum(per_entry, axis=1)))
