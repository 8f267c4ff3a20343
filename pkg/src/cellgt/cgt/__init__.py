from .encoder import ENCODER_PREFIX, CGTEncoder
from .head import HEAD_PREFIX, ClassificationHead, Prediction, classify
from .loss import PROBABILITY_FLOOR, class_weights, node_loss, one_hot

__all__ = [
    "ENCODER_PREFIX",
    "HEAD_PREFIX",
    "PROBABILITY_FLOOR",
    "CGTEncoder",
    "ClassificationHead",
    "Prediction",
    "class_weights",
    "classify",
    "node_loss",
    "one_hot",
]
