from __future__ import annotations

from typing import TYPE_CHECKING

from cellgt.cgt.encoder import CGTEncoder
from cellgt.gradcore import ParameterSet, Tensor, add_linear, linear

if TYPE_CHECKING:
    import numpy as np

__all__ = (
    "TRANSFORMER_HEAD_PREFIX",
    "TransformerInstanceHead",
)

TRANSFORMER_HEAD_PREFIX = "instance_transformer."


class TransformerInstanceHead:
    """Graph-free instance head: node features attend to every other node, edges are ignored.

    Node inputs are projected to ``width``, passed through a transformer
    encoder with no graph tokens or markers, and classified linearly.
    """

    def __init__(
        self, params: ParameterSet, *, width: int, layers: int, heads: int, prefix: str = TRANSFORMER_HEAD_PREFIX
    ) -> None:
        self.params = params
        self.prefix = prefix
        self.encoder = CGTEncoder(
            params, input_width=width, width=width, layers=layers, heads=heads, prefix=f"{prefix}encoder."
        )

    @classmethod
    def create(
        cls,
        params: ParameterSet,
        rng: np.random.Generator,
        *,
        node_in: int,
        width: int,
        num_classes: int,
        layers: int = 2,
        heads: int = 4,
        prefix: str = TRANSFORMER_HEAD_PREFIX,
    ) -> TransformerInstanceHead:
        add_linear(params, f"{prefix}node_in", node_in, width, rng)
        CGTEncoder.create(
            params, rng, input_width=width, width=width, layers=layers, heads=heads, prefix=f"{prefix}encoder."
        )
        add_linear(params, f"{prefix}classifier", width, num_classes, rng)
        return cls(params, width=width, layers=layers, heads=heads, prefix=prefix)

    def _linear(self, name: str, x: Tensor) -> Tensor:
        return linear(x, self.params[f"{self.prefix}{name}.weight"], self.params[f"{self.prefix}{name}.bias"])

    def __call__(self, node_inputs: Tensor, edge_inputs: Tensor, edge_list: object) -> tuple[Tensor, Tensor]:
        embeddings = self.encoder(self._linear("node_in", node_inputs))
        return embeddings, self._linear("classifier", embeddings)
