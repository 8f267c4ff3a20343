from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import EmptySplitError
from cellgt.metrics import MetricsReport, fscores
from cellgt.train.model import CGTModel, GraphCache, ModelState

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from cellgt.data import Sample
    from cellgt.train.checkpoint import Checkpoint

__all__ = (
    "SplitEvaluation",
    "evaluate",
    "evaluate_model",
)


@dataclass(frozen=True)
class SplitEvaluation:
    loss: float
    report: MetricsReport


def evaluate_model(
    model: CGTModel,
    samples: Sequence[Sample],
    graphs: GraphCache,
    tau: NDArray[np.float64] | None = None,
    split_name: str = "val",
) -> SplitEvaluation:
    """Forward every sample once; returns the mean node loss (0 without ``tau``) and the F-score report."""
    if not samples:
        raise EmptySplitError(split_name)
    num_classes = model.config.num_classes
    weights = tau if tau is not None else np.zeros(num_classes)
    preds: list[NDArray[np.intp]] = []
    labels: list[NDArray[np.int64]] = []
    total = 0.0
    for sample in samples:
        if sample.num_nuclei == 0:
            continue
        entry = graphs.get(sample)
        loss, prediction = model.loss(sample, entry, weights)
        total += loss.item()
        preds.append(prediction.labels())
        labels.append(sample.labels)
    if not preds:
        raise EmptySplitError(split_name)
    scores = fscores(np.concatenate(preds), np.concatenate(labels), num_classes)
    return SplitEvaluation(loss=total / len(preds), report=MetricsReport(split=split_name, scores=scores))


def evaluate(checkpoint: Checkpoint, samples: Sequence[Sample], split_name: str = "test") -> MetricsReport:
    """Rebuild the classifier stored in ``checkpoint`` and score it on ``samples``."""
    if not samples:
        raise EmptySplitError(split_name)
    state = ModelState.from_checkpoint(checkpoint)
    graphs = GraphCache.for_model(state.config)
    return evaluate_model(CGTModel(state), samples, graphs, split_name=split_name).report
