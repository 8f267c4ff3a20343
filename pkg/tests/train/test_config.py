import pytest

from cellgt.exceptions import ConfigurationError
from cellgt.testing.builders import tiny_model_config
from cellgt.train import ModelConfig, PretrainConfig, SweepConfig, TrainConfig

__all__ = (
    "TestModelConfig",
    "TestStageConfigs",
    "TestSweepConfig",
)


class TestStageConfigs:
    def test_stage_defaults(self):
        pretrain, finetune = PretrainConfig(), TrainConfig()
        assert (pretrain.num_epochs, pretrain.learning_rate) == (150, 1e-4)
        assert (finetune.num_epochs, finetune.learning_rate) == (50, 1e-5)
        assert finetune.seeds == (0, 1, 2)
        assert (finetune.adam.beta1, finetune.adam.beta2, finetune.adam.eps) == (0.9, 0.999, 1e-8)

    def test_explicit_values_win(self):
        config = TrainConfig(epochs=3, lr=0.5)
        assert (config.num_epochs, config.learning_rate) == (3, 0.5)

    def test_round_trip(self):
        config = PretrainConfig(epochs=2, instance_head="linear", seeds=(4, 5), lambda_dice=0.5)
        assert PretrainConfig.from_dict(config.to_dict()) == config
        assert TrainConfig.from_dict(TrainConfig(flips=True).to_dict()) == TrainConfig(flips=True)

    def test_unknown_keys_name_the_section(self):
        with pytest.raises(ConfigurationError, match="unknown finetune setting") as info:
            TrainConfig.from_dict({"gcn_width": 3})
        assert info.value.field == "gcn_width"

    @pytest.mark.parametrize(
        ("build", "field"),
        [
            (lambda: TrainConfig(lr=0.0), "lr"),
            (lambda: TrainConfig(epochs=-1), "epochs"),
            (lambda: TrainConfig(seeds=()), "seeds"),
            (lambda: TrainConfig(batch_accum=0), "batch_accum"),
            (lambda: PretrainConfig(stage="finetune"), "stage"),
            (lambda: PretrainConfig(instance_head="mlp"), "instance_head"),
        ],
    )
    def test_invalid_values(self, build, field):
        with pytest.raises(ConfigurationError) as info:
            build()
        assert info.value.field == field


class TestModelConfig:
    def test_defaults(self):
        config = ModelConfig()
        assert (config.k, config.link_dim, config.layers, config.width) == (4, 16, 4, 64)
        assert config.token_width == 192

    def test_node_tokens_are_narrower(self):
        assert tiny_model_config(tokenization="nodes").token_width == 8

    def test_round_trip(self):
        config = tiny_model_config()
        assert ModelConfig.from_dict(config.to_dict()) == config

    def test_heads_must_divide_width(self):
        with pytest.raises(ConfigurationError) as info:
            ModelConfig(width=10, heads=4)
        assert info.value.field == "width"

    @pytest.mark.parametrize(
        ("overrides", "field"),
        [
            ({"classifier": "mlp"}, "classifier"),
            ({"gcn_layers": 0}, "gcn_layers"),
        ],
    )
    def test_invalid_classifier_settings(self, overrides, field):
        with pytest.raises(ConfigurationError) as info:
            tiny_model_config(**overrides)
        assert info.value.field == field

    @pytest.mark.parametrize(
        ("overrides", "expected"),
        [
            ({}, True),
            ({"tokenization": "nodes"}, False),
            ({"link_dim": 0}, False),
            ({"classifier": "linear"}, False),
            ({"classifier": "gcn"}, False),
        ],
    )
    def test_link_markers_are_only_used_by_cgtokens(self, overrides, expected):
        assert tiny_model_config(**overrides).uses_link_markers is expected


class TestSweepConfig:
    def test_values_are_checked_against_the_axis(self):
        assert SweepConfig(axis="E", values=(4, 8)).values == ("4", "8")
        with pytest.raises(ConfigurationError):
            SweepConfig(axis="L", values=("two",))
        with pytest.raises(ConfigurationError):
            SweepConfig(axis="tokens", values=("edges",))

    def test_model_ablation_axes(self):
        assert SweepConfig(axis="classifier", values=("linear", "gcn", "transformer")).values[0] == "linear"
        assert SweepConfig(axis="pretrain_head", values=("transformer",)).values == ("transformer",)
        with pytest.raises(ConfigurationError):
            SweepConfig(axis="classifier", values=("unet",))

    def test_round_trip(self):
        config = SweepConfig(axis="init", values=("scratch", "tap"), workers=2)
        assert SweepConfig.from_dict(config.to_dict()) == config
