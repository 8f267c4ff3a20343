from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Protocol

from cellgt.cgt.loss import node_loss, one_hot
from cellgt.features import edge_features, node_features
from cellgt.gcnpre.losses import (
    PretrainLosses,
    dice_loss,
    mask_one_hot,
    pixel_cross_entropy,
    pixel_probabilities,
)
from cellgt.gradcore import Tape, Tensor, add, mul, reshape, softmax_rows, transpose
from cellgt.graph import build_knn_graph

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import ArrayLike, NDArray

    from cellgt.data.sample import Sample
    from cellgt.features import FeatureExtractor
    from cellgt.graph import CellGraph

__all__ = (
    "DEFAULT_K",
    "InstanceHead",
    "PretrainWeights",
    "pretrain_losses",
    "pretrain_step",
)


DEFAULT_K = 4


class InstanceHead(Protocol):
    def __call__(self, node_inputs: Tensor, edge_inputs: Tensor, edge_list: ArrayLike) -> tuple[Tensor, Tensor]: ...


@dataclass(frozen=True, kw_only=True)
class PretrainWeights:
    tau: NDArray[np.float64]
    gamma: float = 2.0
    lambda_dice: float = 1.0
    lambda_ce: float = 1.0


def pretrain_losses(
    sample: Sample,
    graph: CellGraph | None,
    extractor: FeatureExtractor,
    head: InstanceHead,
    weights: PretrainWeights,
    *,
    k: int = DEFAULT_K,
) -> PretrainLosses:
    """Forward pass: instance loss on the head's node posteriors plus Dice and pixel CE on the segmentation.

    Without a ``graph`` the ``k``-nearest-neighbour cell graph of the
    sample's centroids is built here; training loops pass a cached one.
    """
    if graph is None:
        graph = build_knn_graph(sample.centroids, k)
    f, seg_logits = extractor(sample.image)
    _, logits = head(
        node_features(f, graph.centroids),
        edge_features(f, graph.centroids, graph.edge_list),
        graph.edge_list,
    )
    num_classes = logits.shape[1]
    instance = node_loss(softmax_rows(logits), one_hot(sample.labels, num_classes), weights.tau, weights.gamma)

    probs = pixel_probabilities(seg_logits)
    seg_classes, height, width = seg_logits.shape
    dice = dice_loss(
        reshape(transpose(probs), (seg_classes, height, width)),
        mask_one_hot(sample.mask, seg_classes),
    )
    pixel_ce = pixel_cross_entropy(probs, sample.mask)
    total = add(instance, add(mul(dice, weights.lambda_dice), mul(pixel_ce, weights.lambda_ce)))
    return PretrainLosses(instance_cls=instance, dice=dice, pixel_ce=pixel_ce, total=total)


def pretrain_step(
    sample: Sample,
    graph: CellGraph | None,
    extractor: FeatureExtractor,
    head: InstanceHead,
    weights: PretrainWeights,
    *,
    k: int = DEFAULT_K,
    scale: float = 1.0,
) -> PretrainLosses:
    """Forward and backward for one sample; ``scale * total`` is accumulated into the parameters' ``grad``."""
    with Tape() as tape:
        losses = pretrain_losses(sample, graph, extractor, head, weights, k=k)
        objective = mul(losses.total, scale)
    tape.backward(objective)
    return losses
