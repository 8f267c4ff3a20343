"""GENConv-style message passing used as the pretraining instance head."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import ContractError, DimensionError
from cellgt.gradcore import ParameterSet, Tensor, add, add_linear, div, exp, linear, matmul, mul, relu, sub, take_rows

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

__all__ = (
    "GCN_PREFIX",
    "MESSAGE_EPS",
    "GCNHead",
    "aggregation_weights",
    "gcn_forward",
    "validate_edges",
)

GCN_PREFIX = "gcn."
MESSAGE_EPS = 1e-7


def validate_edges(edge_list: ArrayLike, n: int) -> NDArray[np.intp]:
    edges = np.asarray(edge_list, dtype=np.intp).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= n):
        raise ContractError(f"edge list references a node outside [0, {n})")
    return edges


def _incidence(receivers: NDArray[np.intp], n: int) -> NDArray[np.float64]:
    incidence = np.zeros((n, receivers.shape[0]))
    incidence[receivers, np.arange(receivers.shape[0])] = 1.0
    return incidence


def _group_max(values: NDArray[np.float64], receivers: NDArray[np.intp], n: int) -> NDArray[np.float64]:
    out = np.full((n, values.shape[1]), -np.inf)
    np.maximum.at(out, receivers, values)
    return np.where(np.isfinite(out), out, 0.0)


def aggregation_weights(messages: NDArray[np.float64], edge_list: ArrayLike, n: int) -> NDArray[np.float64]:
    """Per-channel softmax weights of each edge's message within its receiver's in-edges."""
    edges = validate_edges(edge_list, n)
    receivers = edges[:, 0]
    shifted = np.exp(messages - _group_max(messages, receivers, n)[receivers])
    totals = _incidence(receivers, n) @ shifted
    return shifted / totals[receivers]


def _softmax_aggregate(messages: Tensor, receivers: NDArray[np.intp], n: int) -> Tensor:
    # the shift is a per-group constant, so the softmax and its gradient are unchanged
    shift = _group_max(messages.values, receivers, n)[receivers]
    incidence = Tensor(_incidence(receivers, n))
    scores = exp(sub(messages, shift))
    numerator = matmul(incidence, mul(scores, messages))
    isolated = (incidence.values.sum(axis=1) == 0).astype(np.float64)[:, None]
    denominator = add(matmul(incidence, scores), isolated)
    return div(numerator, denominator)


class GCNHead:
    """Input projections, message-passing layers and a linear classifier.

    Edge ``(i, j)`` carries a message from ``j`` to ``i``:
    ``relu(h_j + e_ij) + 1e-7``. Messages are softmax-aggregated per node and
    channel (temperature 1) and each layer updates
    ``h_i <- h_i + MLP(h_i + aggr_i)``. Nodes without in-edges only see the
    residual path.
    """

    def __init__(self, params: ParameterSet, *, layers: int = 2, prefix: str = GCN_PREFIX) -> None:
        self.params = params
        self.layers = layers
        self.prefix = prefix

    @classmethod
    def create(
        cls,
        params: ParameterSet,
        rng: np.random.Generator,
        *,
        node_in: int,
        edge_in: int,
        width: int,
        num_classes: int,
        layers: int = 2,
        prefix: str = GCN_PREFIX,
    ) -> GCNHead:
        add_linear(params, f"{prefix}node_in", node_in, width, rng)
        add_linear(params, f"{prefix}edge_in", edge_in, width, rng)
        for layer in range(layers):
            add_linear(params, f"{prefix}layers.{layer}.mlp1", width, 2 * width, rng)
            add_linear(params, f"{prefix}layers.{layer}.mlp2", 2 * width, width, rng)
        add_linear(params, f"{prefix}classifier", width, num_classes, rng)
        return cls(params, layers=layers, prefix=prefix)

    def linear(self, name: str, x: Tensor) -> Tensor:
        return linear(x, self.params[f"{self.prefix}{name}.weight"], self.params[f"{self.prefix}{name}.bias"])

    def __call__(self, node_inputs: Tensor, edge_inputs: Tensor, edge_list: ArrayLike) -> tuple[Tensor, Tensor]:
        """Project raw node/edge features, then run :func:`gcn_forward`."""
        return gcn_forward(self.linear("node_in", node_inputs), self.linear("edge_in", edge_inputs), edge_list, self)


def gcn_forward(
    node_feats: Tensor, edge_feats: Tensor, edge_list: ArrayLike, head: GCNHead
) -> tuple[Tensor, Tensor]:
    """``(embeddings, logits)`` after ``head.layers`` rounds of message passing."""
    n = node_feats.shape[0]
    edges = validate_edges(edge_list, n)
    if edge_feats.shape[0] != edges.shape[0] or edge_feats.shape[1:] != node_feats.shape[1:]:
        raise DimensionError("gcn_forward", node_feats.shape, edge_feats.shape, edges.shape)

    h = node_feats
    receivers, senders = edges[:, 0], edges[:, 1]
    for layer in range(head.layers):
        if edges.shape[0]:
            messages = add(relu(add(take_rows(h, senders), edge_feats)), MESSAGE_EPS)
            aggregated = add(h, _softmax_aggregate(messages, receivers, n))
        else:
            aggregated = h
        update = head.linear(f"layers.{layer}.mlp2", relu(head.linear(f"layers.{layer}.mlp1", aggregated)))
        h = add(h, update)
    return h, head.linear("classifier", h)
