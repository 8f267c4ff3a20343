from .gcn import GCN_PREFIX, MESSAGE_EPS, GCNHead, aggregation_weights, gcn_forward, validate_edges
from .linear_head import LINEAR_HEAD_PREFIX, LinearInstanceHead
from .losses import (
    DICE_SMOOTHING,
    PretrainLosses,
    dice_loss,
    mask_one_hot,
    pixel_cross_entropy,
    pixel_probabilities,
)
from .step import InstanceHead, PretrainWeights, pretrain_losses, pretrain_step
from .transformer_head import TRANSFORMER_HEAD_PREFIX, TransformerInstanceHead

__all__ = [
    "DICE_SMOOTHING",
    "GCN_PREFIX",
    "LINEAR_HEAD_PREFIX",
    "MESSAGE_EPS",
    "TRANSFORMER_HEAD_PREFIX",
    "GCNHead",
    "InstanceHead",
    "LinearInstanceHead",
    "PretrainLosses",
    "PretrainWeights",
    "TransformerInstanceHead",
    "aggregation_weights",
    "dice_loss",
    "gcn_forward",
    "mask_one_hot",
    "pixel_cross_entropy",
    "pixel_probabilities",
    "pretrain_losses",
    "pretrain_step",
    "validate_edges",
]
