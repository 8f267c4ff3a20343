import numpy as np
import pytest

from cellgt.cgt import node_loss, one_hot
from cellgt.gradcore import Tensor
from cellgt.gradcore.gradcheck import analytic_gradients, gradient_relative_error, numerical_gradient
from cellgt.testing.builders import SampleBuilder, tiny_model_config
from cellgt.testing.gradcheck import assert_gradients_match
from cellgt.tokenizer import tokenize
from cellgt.train import CGTModel, GraphCache, ModelState

__all__ = (
    "TestClassifiers",
    "TestGraphCache",
    "TestModelGradients",
)


GROUPS = ("extractor.", "sigma1.", "sigma2.", "sigma3.", "markers.", "encoder.", "head.")
TAU = np.array([1.0, 1.5, 2.0])


def toy(config=None, seed=5):
    """Four nuclei on a 16x16 tile with a k=2 cell graph."""
    config = config or tiny_model_config(link_dim=2)
    model = CGTModel(ModelState.create(config, np.random.default_rng(seed)))
    sample = SampleBuilder.build(centroids=((3.0, 3.0), (12.0, 4.0), (4.0, 12.0), (11.0, 11.0)), size=16)
    return model, sample, GraphCache.for_model(config).get(sample)


def end_to_end_loss(model, sample, entry, node_links):
    f, _ = model.extractor(sample.image)
    tokens = tokenize(entry.graph, f, node_links, model.markers, model.sigma1, model.sigma2, model.sigma3)
    prediction = model.head(model.encoder(tokens.stacked()), entry.graph.n)
    return node_loss(prediction.probs, one_hot(sample.labels, 3), TAU, model.config.gamma)


def spot_entries(tensor, rng, count=4):
    return sorted(int(i) for i in rng.choice(tensor.size, size=min(count, tensor.size), replace=False))


class TestModelGradients:
    def test_groups_cover_every_parameter(self):
        model, _, _ = toy()
        assert all(name.startswith(GROUPS) for name in model.params)
        assert all(any(name.startswith(group) for name in model.params) for group in GROUPS)

    def test_chain_matches_the_model_loss(self):
        model, sample, entry = toy()
        loss, _ = model.loss(sample, entry, TAU)
        assert loss.item() == end_to_end_loss(model, sample, entry, Tensor(entry.links.markers)).item()

    @pytest.mark.parametrize("group", GROUPS)
    def test_parameter_group_matches_finite_differences(self, rng, group):
        model, sample, entry = toy()
        tensors = [tensor for name, tensor in model.params.items() if name.startswith(group)]

        def loss():
            return end_to_end_loss(model, sample, entry, Tensor(entry.links.markers))

        analytic = analytic_gradients(loss, tensors)
        picked, numeric = [], []
        for tensor, grad in zip(tensors, analytic, strict=True):
            entries = spot_entries(tensor, rng)
            numeric.append(numerical_gradient(loss, tensor, h=1e-6, entries=entries).reshape(-1)[entries])
            picked.append(grad.reshape(-1)[entries])
        assert np.any(np.concatenate(picked) != 0)
        assert gradient_relative_error(np.concatenate(picked), np.concatenate(numeric)) <= 1e-4

    def test_link_markers_match_finite_differences(self):
        model, sample, entry = toy()
        node_links = Tensor(entry.links.markers.copy(), requires_grad=True)
        assert entry.links.dim == 2
        assert_gradients_match(lambda: end_to_end_loss(model, sample, entry, node_links), [node_links])


class TestClassifiers:
    @pytest.mark.parametrize(
        ("classifier", "prefixes"),
        [
            ("transformer", ("extractor.", "sigma", "markers.", "encoder.", "head.")),
            ("linear", ("extractor.", "head.")),
            ("gcn", ("extractor.", "gcn.")),
        ],
    )
    def test_parameters_follow_the_classifier(self, classifier, prefixes):
        state = ModelState.create(tiny_model_config(classifier=classifier), np.random.default_rng(0))
        assert all(name.startswith(prefixes) for name in state.params)

    @pytest.mark.parametrize("classifier", ["transformer", "linear", "gcn"])
    def test_predictions_are_row_stochastic(self, classifier):
        model, sample, entry = toy(tiny_model_config(classifier=classifier))
        prediction = model.predict(sample, entry)
        assert prediction.probs.shape == (4, 3)
        assert np.allclose(prediction.probs.values.sum(axis=1), 1.0, atol=1e-12)

    def test_linear_head_reads_the_sampled_node_features(self):
        model, sample, entry = toy(tiny_model_config(classifier="linear"))
        assert model.params["head.weight"].shape == (2 * model.config.backbone.channels, 3)
        assert_gradients_match(
            lambda: model.loss(sample, entry, TAU)[0], [model.params["head.weight"], model.params["head.bias"]]
        )

    def test_gcn_gradients_match_finite_differences(self):
        model, sample, entry = toy(tiny_model_config(classifier="gcn", gcn_layers=1))
        checked = [model.params[name] for name in ("gcn.edge_in.weight", "gcn.classifier.weight")]
        assert_gradients_match(lambda: model.loss(sample, entry, TAU)[0], checked)


class TestGraphCache:
    def test_entries_are_reused_per_flip(self, sample):
        cache = GraphCache.for_model(tiny_model_config())
        first = cache.get(sample)
        assert cache.get(sample) is first
        cache.get(sample, (True, False))
        assert len(cache) == 2
        assert first.links.dim == 4

    @pytest.mark.parametrize(
        "overrides",
        [{"tokenization": "nodes"}, {"classifier": "linear"}, {"classifier": "gcn"}, {"link_dim": 0}],
    )
    def test_no_eigendecomposition_without_link_markers(self, sample, monkeypatch, overrides):
        def refuse(*args, **kwargs):
            raise AssertionError("laplacian was decomposed")

        monkeypatch.setattr("cellgt.train.model.laplacian_markers", refuse)
        cache = GraphCache.for_model(tiny_model_config(**overrides))
        entry = cache.get(sample)
        assert cache.link_dim == 0
        assert entry.links.markers.shape == (sample.num_nuclei, 0)
        assert entry.links.eigenvalues.size == 0
