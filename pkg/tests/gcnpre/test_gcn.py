import numpy as np
import pytest

from cellgt.exceptions import ContractError
from cellgt.gcnpre import GCNHead, aggregation_weights, gcn_forward, validate_edges
from cellgt.gradcore import ParameterSet, Tensor, mul, ops
from cellgt.graph import build_knn_graph
from cellgt.testing.gradcheck import assert_gradients_match

__all__ = ("TestGCNHead",)


WIDTH = 6


def head(rng, layers=2):
    params = ParameterSet()
    return GCNHead.create(params, rng, node_in=4, edge_in=3, width=WIDTH, num_classes=3, layers=layers), params


def path_edges(n):
    forward = [(i, i + 1) for i in range(n - 1)]
    return np.array(forward + [(j, i) for i, j in forward])


class TestGCNHead:
    def test_aggregation_weights_sum_to_one_per_receiver(self, rng):
        graph = build_knn_graph(rng.uniform(0, 50, size=(12, 2)), 4)
        messages = rng.normal(size=(graph.num_edges, 5))
        weights = aggregation_weights(messages, graph.edge_list, graph.n)
        for node in range(graph.n):
            rows = graph.edge_list[:, 0] == node
            assert np.allclose(weights[rows].sum(axis=0), 1.0, atol=1e-9)

    def test_isolated_node_sees_only_its_own_features(self, rng):
        subject, _ = head(rng)
        features = rng.normal(size=(1, WIDTH))
        _, logits = gcn_forward(Tensor(features), Tensor(np.zeros((0, WIDTH))), np.zeros((0, 2)), subject)

        h = Tensor(features)
        for layer in range(2):
            hidden = subject.linear(f"layers.{layer}.mlp1", h)
            h = h + subject.linear(f"layers.{layer}.mlp2", Tensor(np.maximum(hidden.values, 0)))
        assert np.allclose(logits.values, subject.linear("classifier", h).values, atol=1e-12)

    def test_symmetric_twins_get_identical_logits(self, rng):
        subject, _ = head(rng)
        row, edge = rng.normal(size=(1, WIDTH)), rng.normal(size=(1, WIDTH))
        _, logits = gcn_forward(
            Tensor(np.vstack([row, row])), Tensor(np.vstack([edge, edge])), [(0, 1), (1, 0)], subject
        )
        assert np.array_equal(logits.values[0], logits.values[1])

    def test_permuting_nodes_permutes_logits(self, rng):
        subject, _ = head(rng)
        graph = build_knn_graph(rng.uniform(0, 50, size=(6, 2)), 3)
        nodes = rng.normal(size=(6, WIDTH))
        edges = rng.normal(size=(graph.num_edges, WIDTH))
        perm = rng.permutation(6)
        inverse = np.argsort(perm)
        _, logits = gcn_forward(Tensor(nodes), Tensor(edges), graph.edge_list, subject)
        _, permuted = gcn_forward(Tensor(nodes[perm]), Tensor(edges), inverse[graph.edge_list], subject)
        assert np.allclose(permuted.values, logits.values[perm], atol=1e-12)

    def test_two_layers_never_see_three_hops(self, rng):
        subject, _ = head(rng)
        edge_list = path_edges(6)
        nodes = rng.normal(size=(6, WIDTH))
        edges = Tensor(rng.normal(size=(len(edge_list), WIDTH)))
        _, before = gcn_forward(Tensor(nodes), edges, edge_list, subject)

        changed = nodes.copy()
        changed[3] += 10.0 * rng.normal(size=WIDTH)
        _, after = gcn_forward(Tensor(changed), edges, edge_list, subject)
        assert np.array_equal(before.values[0], after.values[0])
        assert not np.array_equal(before.values[1], after.values[1])

    def test_dangling_edge_is_rejected(self, rng):
        subject, _ = head(rng)
        with pytest.raises(ContractError):
            gcn_forward(Tensor(np.zeros((2, WIDTH))), Tensor(np.zeros((1, WIDTH))), [(0, 2)], subject)
        with pytest.raises(ContractError):
            validate_edges([(-1, 0)], 2)

    def test_projects_raw_inputs(self, rng):
        subject, params = head(rng)
        graph = build_knn_graph(rng.uniform(0, 50, size=(4, 2)), 2)
        embeddings, logits = subject(
            Tensor(rng.normal(size=(4, 4))), Tensor(rng.normal(size=(graph.num_edges, 3))), graph.edge_list
        )
        assert embeddings.shape == (4, WIDTH)
        assert logits.shape == (4, 3)
        assert "gcn.node_in.weight" in params

    def test_gradients_match_finite_differences(self, rng):
        subject, params = head(rng, layers=1)
        graph = build_knn_graph(rng.uniform(0, 50, size=(5, 2)), 2)
        nodes = Tensor(rng.normal(size=(5, 4)), requires_grad=True)
        edges = Tensor(rng.normal(size=(graph.num_edges, 3)), requires_grad=True)
        g = Tensor(rng.normal(size=(5, 3)))
        checked = [nodes, edges, params["gcn.node_in.weight"], params["gcn.classifier.weight"]]
        assert_gradients_match(lambda: ops.sum(mul(subject(nodes, edges, graph.edge_list)[1], g)), checked)
