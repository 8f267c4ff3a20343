from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from cellgt.cgt import CGTEncoder, ClassificationHead, Prediction, node_loss, one_hot
from cellgt.data import flip_sample
from cellgt.features import FeatureExtractor, edge_features, node_features
from cellgt.gcnpre import GCNHead
from cellgt.gradcore import ParameterSet, Tensor, softmax_rows
from cellgt.graph import LinkMarkers, build_knn_graph, laplacian_markers
from cellgt.tokenizer import Projection, TokenMarkers, tokenize, tokenize_nodes
from cellgt.train.checkpoint import Checkpoint, load_into
from cellgt.train.config import ModelConfig

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from cellgt.data import Sample
    from cellgt.graph import CellGraph

__all__ = (
    "CGTModel",
    "GraphCache",
    "ModelState",
    "SampleGraph",
    "maybe_flip",
)


@dataclass(frozen=True)
class SampleGraph:
    graph: CellGraph
    links: LinkMarkers


class GraphCache:
    """Cell graphs and link markers per (sample, flip) pair; they depend on centroids only.

    With ``link_dim == 0`` the Laplacian is never decomposed and every entry
    carries zero-width markers.
    """

    def __init__(self, k: int, link_dim: int) -> None:
        self.k = k
        self.link_dim = link_dim
        self._entries: dict[tuple[str, bool, bool], SampleGraph] = {}

    @classmethod
    def for_model(cls, config: ModelConfig) -> GraphCache:
        return cls(k=config.k, link_dim=config.link_dim if config.uses_link_markers else 0)

    def get(self, sample: Sample, flips: tuple[bool, bool] = (False, False)) -> SampleGraph:
        key = (sample.sample_id, *flips)
        entry = self._entries.get(key)
        if entry is None:
            graph = build_knn_graph(sample.centroids, self.k)
            links = laplacian_markers(graph, self.link_dim) if self.link_dim else LinkMarkers.empty(graph.n)
            entry = SampleGraph(graph, links)
            self._entries[key] = entry
        return entry

    def __len__(self) -> int:
        return len(self._entries)


def maybe_flip(sample: Sample, rng: np.random.Generator, enabled: bool) -> tuple[Sample, tuple[bool, bool]]:
    """Random horizontal/vertical flip when ``enabled``; always draws two numbers so streams stay aligned."""
    if not enabled:
        return sample, (False, False)
    horizontal, vertical = (bool(v) for v in rng.random(2) < 0.5)
    return flip_sample(sample, horizontal=horizontal, vertical=vertical), (horizontal, vertical)


@dataclass(frozen=True, eq=False)
class ModelState:
    """Every learnable tensor of the classifier, named by component prefix."""

    config: ModelConfig
    params: ParameterSet

    @classmethod
    def create(cls, config: ModelConfig, rng: np.random.Generator) -> ModelState:
        params = ParameterSet()
        FeatureExtractor.create(config.backbone, params, rng)
        c_f, width = config.backbone.channels, config.width
        if config.classifier == "linear":
            ClassificationHead.create(params, rng, 2 * c_f, config.num_classes)
            return cls(config, params)
        if config.classifier == "gcn":
            GCNHead.create(
                params,
                rng,
                node_in=2 * c_f,
                edge_in=c_f,
                width=width,
                num_classes=config.num_classes,
                layers=config.gcn_layers,
            )
            return cls(config, params)

        Projection.create(params, "sigma1", 2 * c_f, width, rng)
        if config.tokenization == "cgtoken":
            Projection.create(params, "sigma2", c_f, width, rng)
            Projection.create(params, "sigma3", 2 * config.link_dim, width, rng)
            TokenMarkers.create(params, "markers.", width, rng, std=config.marker_std)
        CGTEncoder.create(
            params,
            rng,
            input_width=config.token_width,
            width=width,
            layers=config.layers,
            heads=config.heads,
            ffn_multiplier=config.ffn_multiplier,
        )
        ClassificationHead.create(params, rng, width, config.num_classes)
        return cls(config, params)

    @classmethod
    def from_checkpoint(cls, checkpoint: Checkpoint) -> ModelState:
        config = ModelConfig.from_dict(checkpoint.config["model"])
        state = cls.create(config, np.random.default_rng(0))
        load_into(state.params, checkpoint.tensors)
        return state

    def snapshot(self) -> dict[str, NDArray[np.float64]]:
        return self.params.snapshot()


class CGTModel:
    """Feature extractor -> node classifier -> node posteriors.

    The classifier is the token encoder by default; ``linear`` and ``gcn``
    classify the sampled node features directly or after message passing.
    """

    def __init__(self, state: ModelState) -> None:
        config = state.config
        params = state.params
        self.config = config
        self.params = params
        self.extractor = FeatureExtractor(config.backbone, params)
        if config.classifier == "gcn":
            self.gcn = GCNHead(params, layers=config.gcn_layers)
            return
        self.head = ClassificationHead(params)
        if config.classifier == "linear":
            return
        self.sigma1 = Projection.from_params(params, "sigma1")
        if config.tokenization == "cgtoken":
            self.sigma2 = Projection.from_params(params, "sigma2")
            self.sigma3 = Projection.from_params(params, "sigma3")
            self.markers = TokenMarkers.from_params(params, "markers.")
        self.encoder = CGTEncoder(
            params, input_width=config.token_width, width=config.width, layers=config.layers, heads=config.heads
        )

    def tokens(self, image: NDArray[np.float64], entry: SampleGraph) -> Tensor:
        f, _ = self.extractor(image)
        if self.config.tokenization == "nodes":
            return tokenize_nodes(entry.graph, f, self.sigma1).stacked()
        return tokenize(entry.graph, f, entry.links, self.markers, self.sigma1, self.sigma2, self.sigma3).stacked()

    def predict(self, sample: Sample, entry: SampleGraph) -> Prediction:
        graph = entry.graph
        if self.config.classifier == "transformer":
            return self.head(self.encoder(self.tokens(sample.image, entry)), graph.n)
        f, _ = self.extractor(sample.image)
        nodes = node_features(f, graph.centroids)
        if self.config.classifier == "linear":
            return self.head(nodes, graph.n)
        _, logits = self.gcn(nodes, edge_features(f, graph.centroids, graph.edge_list), graph.edge_list)
        return Prediction(softmax_rows(logits))

    def loss(self, sample: Sample, entry: SampleGraph, tau: NDArray[np.float64]) -> tuple[Tensor, Prediction]:
        prediction = self.predict(sample, entry)
        targets = one_hot(sample.labels, self.config.num_classes)
        return node_loss(prediction.probs, targets, tau, self.config.gamma), prediction
