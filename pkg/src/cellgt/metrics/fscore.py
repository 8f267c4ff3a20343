from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from cellgt.exceptions import ContractError, DimensionError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

__all__ = (
    "FScores",
    "MetricsReport",
    "confusion_matrix",
    "fscores",
    "fscores_from_confusion",
)


def _class_ids(values: ArrayLike, num_classes: int, name: str) -> NDArray[np.intp]:
    ids = np.asarray(values, dtype=np.intp).reshape(-1)
    if ids.size and (ids.min() < 0 or ids.max() >= num_classes):
        raise ContractError(f"{name} contain a class id outside [0, {num_classes})")
    return ids


def confusion_matrix(preds: ArrayLike, labels: ArrayLike, num_classes: int) -> NDArray[np.int64]:
    """``counts[true, predicted]``."""
    p = _class_ids(preds, num_classes, "predictions")
    t = _class_ids(labels, num_classes, "labels")
    if p.shape != t.shape:
        raise DimensionError("confusion_matrix", p.shape, t.shape)
    counts = np.zeros((num_classes, num_classes), dtype=np.int64)
    np.add.at(counts, (t, p), 1)
    return counts


@dataclass(frozen=True)
class FScores:
    per_class: list[float]
    f_avg: float
    confusion: list[list[int]]

    @property
    def count(self) -> int:
        return int(np.sum(self.confusion))


def fscores_from_confusion(confusion: NDArray[np.int64]) -> FScores:
    """Per-class F1 (0 when precision + recall is 0) and their unweighted mean."""
    tp = np.diag(confusion).astype(np.float64)
    predicted = confusion.sum(axis=0).astype(np.float64)
    actual = confusion.sum(axis=1).astype(np.float64)
    precision = np.divide(tp, predicted, out=np.zeros_like(tp), where=predicted > 0)
    recall = np.divide(tp, actual, out=np.zeros_like(tp), where=actual > 0)
    total = precision + recall
    f = np.divide(2.0 * precision * recall, total, out=np.zeros_like(tp), where=total > 0)
    return FScores(per_class=[float(v) for v in f], f_avg=float(f.mean()), confusion=confusion.tolist())


def fscores(preds: ArrayLike, labels: ArrayLike, num_classes: int) -> FScores:
    return fscores_from_confusion(confusion_matrix(preds, labels, num_classes))


@dataclass(frozen=True)
class MetricsReport:
    """Evaluation output: per-class F, F_avg, confusion matrix and nucleus count."""

    split: str
    scores: FScores

    def to_dict(self) -> dict[str, Any]:
        return {
            "split": self.split,
            "per_class_f": self.scores.per_class,
            "f_avg": self.scores.f_avg,
            "confusion": self.scores.confusion,
            "count": self.scores.count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n"

    def write(self, path: str | Path) -> Path:
        target = Path(path)
        target.write_text(self.to_json(), encoding="utf-8")
        return target

    def summary(self) -> str:
        per_class = "  ".join(f"F{b}={f:.4f}" for b, f in enumerate(self.scores.per_class))
        return f"{self.split}: {per_class}  F_avg={self.scores.f_avg:.4f}  (n={self.scores.count})"
