import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cellgt.exceptions import ConfigurationError
from cellgt.features import FeatureMap, bilinear_sample_many, positional_table
from cellgt.gradcore import ParameterSet, Tensor, mul, ops
from cellgt.graph import build_knn_graph, laplacian_markers
from cellgt.testing.gradcheck import assert_gradients_match
from cellgt.tokenizer import Projection, TokenMarkers, tokenize, tokenize_nodes

__all__ = (
    "TestTokenize",
    "TestTokenizeNodes",
)


C_F, WIDTH, C_L = 8, 6, 4


def tokenizer_parts(rng, c_f=C_F, width=WIDTH, c_l=C_L):
    params = ParameterSet()
    markers = TokenMarkers.create(params, "markers.", width, rng, std=0.5)
    sigma1 = Projection.create(params, "sigma1", 2 * c_f, width, rng)
    sigma2 = Projection.create(params, "sigma2", c_f, width, rng)
    sigma3 = Projection.create(params, "sigma3", 2 * c_l, width, rng)
    return params, markers, sigma1, sigma2, sigma3


def random_scene(rng, n, k=3, c_f=C_F, c_l=C_L):
    centroids = rng.uniform(0, 32, size=(n, 2))
    graph = build_knn_graph(centroids, k)
    f = FeatureMap(Tensor(rng.normal(size=(c_f, 8, 8))))
    return graph, f, laplacian_markers(graph, c_l)


def naive_tokens(graph, f, links, markers, sigma1, sigma2, sigma3):
    def project(p, x):
        return x @ p.weight.values + p.bias.values

    m = links.markers
    nodes = []
    for i in range(graph.n):
        z = bilinear_sample_many(f, graph.centroids[i : i + 1]).values[0]
        rho = positional_table(graph.centroids[i : i + 1], f.channels)[0]
        nodes.append(
            np.concatenate(
                [
                    project(sigma1, np.concatenate([z, rho])),
                    project(sigma3, np.concatenate([m[i], m[i]])),
                    markers.node.values[0],
                ]
            )
        )
    edges = []
    for i, j in graph.edge_list:
        mid = (graph.centroids[i] + graph.centroids[j]) / 2
        z = bilinear_sample_many(f, mid[None, :]).values[0]
        edges.append(
            np.concatenate(
                [project(sigma2, z), project(sigma3, np.concatenate([m[i], m[j]])), markers.edge.values[0]]
            )
        )
    return np.array(nodes), np.array(edges).reshape(len(edges), 3 * markers.width)


class TestTokenize:
    def test_single_node_graph(self, rng):
        graph, f, links = random_scene(rng, 1)
        _, *parts = tokenizer_parts(rng)
        tokens = tokenize(graph, f, links, *parts)
        assert tokens.num_nodes == 1
        assert tokens.num_edges == 0
        assert tokens.width == 3 * WIDTH
        assert tokens.stacked().shape == (1, 3 * WIDTH)

    def test_zero_features_leave_only_position_in_the_first_block(self, rng):
        graph, _, links = random_scene(rng, 5)
        f = FeatureMap(Tensor(np.zeros((C_F, 8, 8))))
        _, markers, sigma1, sigma2, sigma3 = tokenizer_parts(rng)
        sigma1.bias.values = np.zeros(WIDTH)
        tokens = tokenize(graph, f, links, markers, sigma1, sigma2, sigma3)
        rho = positional_table(graph.centroids, C_F)
        expected = rho @ sigma1.weight.values[C_F:]
        assert np.allclose(tokens.node_tokens.values[:, :WIDTH], expected, atol=1e-12)

    def test_identity_sigma3_exposes_link_markers(self, rng):
        graph = build_knn_graph([(4.0, 4.0), (20.0, 8.0)], 1)
        c_l = WIDTH // 2
        links = laplacian_markers(graph, c_l)
        f = FeatureMap(Tensor(rng.normal(size=(C_F, 8, 8))))
        _, markers, sigma1, sigma2, _ = tokenizer_parts(rng, c_l=c_l)
        identity = Projection(Tensor(np.eye(WIDTH)), Tensor(np.zeros(WIDTH)))
        tokens = tokenize(graph, f, links, markers, sigma1, sigma2, identity)
        m = links.markers
        for d, (i, j) in enumerate(graph.edge_list):
            assert np.array_equal(tokens.edge_tokens.values[d, WIDTH : 2 * WIDTH], np.concatenate([m[i], m[j]]))

    @settings(max_examples=20, derandomize=True, deadline=None)
    @given(seed=st.integers(min_value=0, max_value=2**32 - 1), n=st.integers(min_value=1, max_value=12))
    def test_matches_naive_assembly(self, seed, n):
        rng = np.random.default_rng(seed)
        graph, f, links = random_scene(rng, n)
        _, *parts = tokenizer_parts(rng)
        tokens = tokenize(graph, f, links, *parts)
        nodes, edges = naive_tokens(graph, f, links, *parts)

        assert tokens.node_tokens.shape == (n, 3 * WIDTH)
        assert tokens.edge_tokens.shape == (graph.k * n, 3 * WIDTH)
        assert np.allclose(tokens.node_tokens.values, nodes, atol=1e-12)
        assert np.allclose(tokens.edge_tokens.values, edges, atol=1e-12)

    def test_marker_blocks_are_constant(self, rng):
        graph, f, links = random_scene(rng, 9)
        _, markers, *sigmas = tokenizer_parts(rng)
        tokens = tokenize(graph, f, links, markers, *sigmas)
        assert np.all(tokens.node_tokens.values[:, 2 * WIDTH :] == markers.node.values)
        assert np.all(tokens.edge_tokens.values[:, 2 * WIDTH :] == markers.edge.values)

    def test_stacked_puts_nodes_first(self, rng):
        graph, f, links = random_scene(rng, 4)
        _, *parts = tokenizer_parts(rng)
        tokens = tokenize(graph, f, links, *parts)
        stacked = tokens.stacked().values
        assert stacked.shape == (4 + graph.num_edges, 3 * WIDTH)
        assert np.array_equal(stacked[:4], tokens.node_tokens.values)

    def test_relabelling_permutes_node_tokens(self, rng):
        centroids = rng.uniform(0, 32, size=(8, 2))
        perm = rng.permutation(8)
        f = FeatureMap(Tensor(rng.normal(size=(C_F, 8, 8))))
        _, *parts = tokenizer_parts(rng, c_l=0)
        original = laplacian_markers(build_knn_graph(centroids, 3), 0)
        graph_a = build_knn_graph(centroids, 3)
        graph_b = build_knn_graph(centroids[perm], 3)
        a = tokenize(graph_a, f, original, *parts).node_tokens.values
        b = tokenize(graph_b, f, laplacian_markers(graph_b, 0), *parts).node_tokens.values
        assert np.allclose(a[perm], b, atol=1e-12)

    def test_projection_widths_are_checked(self, rng):
        graph, f, links = random_scene(rng, 4, c_l=3)
        _, *parts = tokenizer_parts(rng)
        with pytest.raises(ConfigurationError) as exc:
            tokenize(graph, f, links, *parts)
        assert exc.value.field == "sigma3"

    def test_gradients_reach_every_learnable_part(self, rng):
        graph, _, links = random_scene(rng, 5)
        values = Tensor(rng.normal(size=(C_F, 8, 8)), requires_grad=True)
        params, markers, sigma1, sigma2, sigma3 = tokenizer_parts(rng)
        g_nodes = Tensor(rng.normal(size=(5, 3 * WIDTH)))
        g_edges = Tensor(rng.normal(size=(graph.num_edges, 3 * WIDTH)))

        def loss():
            tokens = tokenize(graph, FeatureMap(values), links, markers, sigma1, sigma2, sigma3)
            return ops.sum(mul(tokens.node_tokens, g_nodes)) + ops.sum(mul(tokens.edge_tokens, g_edges))

        assert_gradients_match(loss, [values, *params.values()])

    def test_marker_tensor_matches_the_bundle_and_gets_gradients(self, rng):
        graph, f, links = random_scene(rng, 5)
        _, *parts = tokenizer_parts(rng)
        node_links = Tensor(links.markers.copy(), requires_grad=True)
        from_bundle = tokenize(graph, f, links, *parts).stacked()
        assert np.array_equal(tokenize(graph, f, node_links, *parts).stacked().values, from_bundle.values)

        g = Tensor(rng.normal(size=(graph.n + graph.num_edges, 3 * WIDTH)))

        def loss():
            return ops.sum(mul(tokenize(graph, f, node_links, *parts).stacked(), g))

        assert_gradients_match(loss, [node_links])


class TestTokenizeNodes:
    def test_node_only_tokens(self, rng):
        graph, f, _ = random_scene(rng, 6)
        params = ParameterSet()
        sigma1 = Projection.create(params, "sigma1", 2 * C_F, WIDTH, rng)
        tokens = tokenize_nodes(graph, f, sigma1)
        assert tokens.num_nodes == 6
        assert tokens.num_edges == 0
        assert tokens.width == WIDTH
        assert tokens.stacked() is tokens.node_tokens
