from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import ConfigurationError
from cellgt.features import edge_features, node_features
from cellgt.gradcore import ParameterSet, Tensor, add_linear, concat, linear, normal_init, repeat_rows, take_rows

if TYPE_CHECKING:
    from cellgt.features import FeatureMap
    from cellgt.graph import CellGraph, LinkMarkers

__all__ = (
    "Projection",
    "TokenMarkers",
    "TokenSet",
    "tokenize",
    "tokenize_nodes",
)


@dataclass(frozen=True)
class Projection:
    """Affine map ``x @ weight + bias``; ``weight`` is (in, out)."""

    weight: Tensor
    bias: Tensor | None = None

    @property
    def in_features(self) -> int:
        return self.weight.shape[0]

    @property
    def out_features(self) -> int:
        return self.weight.shape[1]

    @classmethod
    def create(cls, params: ParameterSet, name: str, fan_in: int, fan_out: int, rng: np.random.Generator) -> Projection:
        weight, bias = add_linear(params, name, fan_in, fan_out, rng)
        return cls(weight, bias)

    @classmethod
    def from_params(cls, params: ParameterSet, name: str) -> Projection:
        return cls(params[f"{name}.weight"], params.get(f"{name}.bias"))

    def __call__(self, x: Tensor) -> Tensor:
        return linear(x, self.weight, self.bias)


@dataclass(frozen=True)
class TokenMarkers:
    """The learnable node marker ``M^v`` and edge marker ``M^e``, each (1, C)."""

    node: Tensor
    edge: Tensor

    @property
    def width(self) -> int:
        return self.node.shape[1]

    @classmethod
    def create(
        cls, params: ParameterSet, prefix: str, width: int, rng: np.random.Generator, std: float = 0.02
    ) -> TokenMarkers:
        node = params.add(f"{prefix}node", normal_init(rng, (1, width), std))
        edge = params.add(f"{prefix}edge", normal_init(rng, (1, width), std))
        return cls(node, edge)

    @classmethod
    def from_params(cls, params: ParameterSet, prefix: str) -> TokenMarkers:
        return cls(params[f"{prefix}node"], params[f"{prefix}edge"])


@dataclass(frozen=True)
class TokenSet:
    """Node tokens (row ``i`` = node ``i``) and edge tokens in edge-list order."""

    node_tokens: Tensor
    edge_tokens: Tensor

    @property
    def num_nodes(self) -> int:
        return self.node_tokens.shape[0]

    @property
    def num_edges(self) -> int:
        return self.edge_tokens.shape[0]

    @property
    def width(self) -> int:
        return self.node_tokens.shape[1]

    def stacked(self) -> Tensor:
        """All tokens as one (n + D, width) matrix, nodes first."""
        if self.num_edges == 0:
            return self.node_tokens
        return concat([self.node_tokens, self.edge_tokens], axis=0)


def _check(projection: Projection, name: str, fan_in: int, fan_out: int) -> None:
    if projection.in_features != fan_in or projection.out_features != fan_out:
        raise ConfigurationError(
            f"{name} maps {projection.in_features}->{projection.out_features}, expected {fan_in}->{fan_out}",
            field=name,
        )


def tokenize(
    graph: CellGraph,
    f: FeatureMap,
    links: LinkMarkers | Tensor,
    markers: TokenMarkers,
    sigma1: Projection,
    sigma2: Projection,
    sigma3: Projection,
) -> TokenSet:
    """Assemble node tokens ``[σ1(z‖ρ), σ3(m_i‖m_i), M^v]`` and edge tokens ``[σ2(z_e), σ3(m_i‖m_j), M^e]``.

    ``links`` is either the marker bundle of ``graph`` or an (n, c_l) tensor
    of per-node link markers, which then receives gradients.
    """
    m = links if isinstance(links, Tensor) else Tensor(links.markers)
    width = markers.width
    c_l = m.shape[1]
    _check(sigma1, "sigma1", 2 * f.channels, width)
    _check(sigma2, "sigma2", f.channels, width)
    _check(sigma3, "sigma3", 2 * c_l, width)
    if m.shape[0] != graph.n:
        raise ConfigurationError(f"link markers cover {m.shape[0]} nodes, graph has {graph.n}", field="link_markers")

    n, d = graph.n, graph.num_edges
    node_tokens = concat(
        [sigma1(node_features(f, graph.centroids)), sigma3(concat([m, m], axis=1)), repeat_rows(markers.node, n)],
        axis=-1,
    )

    src, dst = graph.edge_list[:, 0], graph.edge_list[:, 1]
    z_edges = edge_features(f, graph.centroids, graph.edge_list)
    edge_links = concat([take_rows(m, src), take_rows(m, dst)], axis=1)
    edge_tokens = concat(
        [sigma2(z_edges), sigma3(edge_links), repeat_rows(markers.edge, d)],
        axis=-1,
    )
    return TokenSet(node_tokens=node_tokens, edge_tokens=edge_tokens)


def tokenize_nodes(graph: CellGraph, f: FeatureMap, sigma1: Projection) -> TokenSet:
    """Node-only tokens ``σ1(z‖ρ)``: no edge tokens and no markers."""
    _check(sigma1, "sigma1", 2 * f.channels, sigma1.out_features)
    node_tokens = sigma1(node_features(f, graph.centroids))
    return TokenSet(node_tokens=node_tokens, edge_tokens=Tensor(np.zeros((0, node_tokens.shape[1]))))
