from .backbone import EXTRACTOR_PREFIX, FeatureExtractor, FeatureMap, extract
from .config import BackboneConfig
from .positional import positional_table, sinusoidal_pe
from .sampling import (
    FEATURE_STRIDE,
    bilinear_sample,
    bilinear_sample_many,
    bilinear_weights,
    edge_features,
    edge_midpoint,
    edge_midpoints,
    node_features,
)

__all__ = [
    "EXTRACTOR_PREFIX",
    "FEATURE_STRIDE",
    "BackboneConfig",
    "FeatureExtractor",
    "FeatureMap",
    "bilinear_sample",
    "bilinear_sample_many",
    "bilinear_weights",
    "edge_midpoint",
    "edge_features",
    "edge_midpoints",
    "extract",
    "node_features",
    "positional_table",
    "sinusoidal_pe",
]
