from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

from cellgt.exceptions import NumericFailureError
from cellgt.logging import Logger

if TYPE_CHECKING:
    import numpy as np

    from cellgt.data import Sample
    from cellgt.train.optimizer import Adam

__all__ = (
    "EpochStats",
    "run_epoch",
)


@dataclass
class EpochStats:
    steps: int
    losses: dict[str, float]


def run_epoch(
    samples: Sequence[Sample],
    order_rng: np.random.Generator,
    optimizer: Adam,
    batch_accum: int,
    step_fn: Callable[[Sample, float], dict[str, float]],
    *,
    step: int,
    seed: int,
    stage: str,
    logger: Logger,
) -> EpochStats:
    """One shuffled pass; gradients of ``batch_accum`` samples are averaged per optimizer step.

    ``step_fn(sample, scale)`` runs forward and backward with the loss
    scaled by ``scale`` and returns the unscaled loss components; the
    ``"total"`` entry is checked for finiteness before anything is updated.
    """
    totals: dict[str, float] = {}
    order = order_rng.permutation(len(samples))
    pending = 0
    for position, index in enumerate(order):
        components = step_fn(samples[int(index)], 1.0 / batch_accum)
        if not math.isfinite(components["total"]):
            logger.error("train.loss.non_finite", stage=stage, step=step + 1, seed=seed)
            raise NumericFailureError(step=step + 1, seed=seed, stage=stage)
        for key, value in components.items():
            totals[key] = totals.get(key, 0.0) + value
        pending += 1
        if pending == batch_accum or position == len(order) - 1:
            optimizer.step()
            optimizer.zero_grad()
            step += 1
            pending = 0
    count = max(1, len(order))
    return EpochStats(steps=step, losses={key: value / count for key, value in totals.items()})
