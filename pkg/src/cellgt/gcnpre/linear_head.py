from __future__ import annotations

from typing import TYPE_CHECKING

from cellgt.gradcore import ParameterSet, Tensor, add_linear, linear

if TYPE_CHECKING:
    import numpy as np

__all__ = (
    "LINEAR_HEAD_PREFIX",
    "LinearInstanceHead",
)

LINEAR_HEAD_PREFIX = "instance_linear."


class LinearInstanceHead:
    """Graph-free instance head: each node's sampled feature goes through one linear layer."""

    def __init__(self, params: ParameterSet, prefix: str = LINEAR_HEAD_PREFIX) -> None:
        self.weight = params[f"{prefix}weight"]
        self.bias = params[f"{prefix}bias"]

    @classmethod
    def create(
        cls, params: ParameterSet, rng: np.random.Generator, *, node_in: int, num_classes: int
    ) -> LinearInstanceHead:
        add_linear(params, LINEAR_HEAD_PREFIX.rstrip("."), node_in, num_classes, rng)
        return cls(params)

    def __call__(self, node_inputs: Tensor, edge_inputs: Tensor, edge_list: object) -> tuple[Tensor, Tensor]:
        return node_inputs, linear(node_inputs, self.weight, self.bias)
