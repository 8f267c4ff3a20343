from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import ContractError
from cellgt.gradcore import ParameterSet, Tensor, add_linear, index, linear, softmax_rows

if TYPE_CHECKING:
    from numpy.typing import NDArray

__all__ = (
    "HEAD_PREFIX",
    "ClassificationHead",
    "Prediction",
    "classify",
)

HEAD_PREFIX = "head."


@dataclass(frozen=True)
class Prediction:
    """Row-stochastic class posteriors, one row per node."""

    probs: Tensor

    @property
    def num_nodes(self) -> int:
        return self.probs.shape[0]

    def labels(self) -> NDArray[np.intp]:
        return np.argmax(self.probs.values, axis=1)


class ClassificationHead:
    def __init__(self, params: ParameterSet, prefix: str = HEAD_PREFIX) -> None:
        self.weight = params[f"{prefix}weight"]
        self.bias = params[f"{prefix}bias"]

    @classmethod
    def create(
        cls, params: ParameterSet, rng: np.random.Generator, width: int, num_classes: int, prefix: str = HEAD_PREFIX
    ) -> ClassificationHead:
        add_linear(params, prefix.rstrip("."), width, num_classes, rng)
        return cls(params, prefix)

    def __call__(self, outputs: Tensor, n: int) -> Prediction:
        return classify(outputs, n, self.weight, self.bias)


def classify(outputs: Tensor, n: int, weight: Tensor, bias: Tensor | None = None) -> Prediction:
    """Softmax of a linear map over the first ``n`` encoder rows; edge rows are dropped."""
    if outputs.shape[0] < n:
        raise ContractError(f"need at least {n} encoder rows, got {outputs.shape[0]}")
    return Prediction(softmax_rows(linear(index(outputs, slice(0, n)), weight, bias)))
