from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from cellgt.cgt.loss import PROBABILITY_FLOOR
from cellgt.exceptions import ContractError, DimensionError
from cellgt.gradcore import Tensor, add, clip, div, log, mean, mul, neg, ops, reshape, softmax_rows, sub, transpose

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

__all__ = (
    "DICE_SMOOTHING",
    "PretrainLosses",
    "dice_loss",
    "mask_one_hot",
    "pixel_cross_entropy",
    "pixel_probabilities",
)

DICE_SMOOTHING = 1.0


@dataclass(frozen=True)
class PretrainLosses:
    instance_cls: Tensor
    dice: Tensor
    pixel_ce: Tensor
    total: Tensor

    def as_floats(self) -> dict[str, float]:
        return {
            "instance_cls": self.instance_cls.item(),
            "dice": self.dice.item(),
            "pixel_ce": self.pixel_ce.item(),
            "total": self.total.item(),
        }


def mask_one_hot(mask: ArrayLike, num_classes: int) -> NDArray[np.float64]:
    """(h, w) class map -> (num_classes, h, w) indicator stack."""
    ids = np.asarray(mask, dtype=np.intp)
    if ids.size and (ids.min() < 0 or ids.max() >= num_classes):
        raise ContractError(f"mask class ids must lie in [0, {num_classes})")
    return (np.arange(num_classes)[:, None, None] == ids[None]).astype(np.float64)


def pixel_probabilities(logits: Tensor) -> Tensor:
    """Channel softmax of (K, h, w) logits, returned as (h*w, K)."""
    channels = logits.shape[0]
    return softmax_rows(transpose(reshape(logits, (channels, logits.shape[1] * logits.shape[2]))))


def dice_loss(probs: Tensor, target: ArrayLike, smoothing: float = DICE_SMOOTHING) -> Tensor:
    """``1 - mean_k (2 Σ p t + s) / (Σ p + Σ t + s)`` over the leading class axis."""
    t = np.asarray(target, dtype=np.float64)
    if t.shape != probs.shape:
        raise DimensionError("dice_loss", probs.shape, t.shape)
    classes = probs.shape[0]
    p = reshape(probs, (classes, -1))
    flat_t = t.reshape(classes, -1)
    intersection = ops.sum(mul(p, flat_t), axis=1)
    numerator = add(mul(intersection, 2.0), smoothing)
    denominator = add(ops.sum(p, axis=1), flat_t.sum(axis=1) + smoothing)
    return sub(1.0, mean(div(numerator, denominator)))


def pixel_cross_entropy(probs: Tensor, mask: ArrayLike) -> Tensor:
    """Mean pixel cross-entropy of (h*w, K) probabilities against an (h, w) class map."""
    classes = probs.shape[1]
    target = mask_one_hot(mask, classes).reshape(classes, -1).T
    if target.shape != probs.shape:
        raise DimensionError("pixel_cross_entropy", probs.shape, target.shape)
    log_p = log(clip(probs, PROBABILITY_FLOOR, 1.0))
    return neg(mean(ops.sum(mul(log_p, target), axis=1)))
