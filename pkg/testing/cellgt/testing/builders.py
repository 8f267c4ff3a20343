from __future__ import annotations

from dataclasses import replace
from typing import TYPE_CHECKING, Any

import numpy as np

from cellgt.cli.experiment import ExperimentConfig
from cellgt.data import Corpus, CorpusConfig, Sample, build_corpus
from cellgt.features import BackboneConfig
from cellgt.train import ModelConfig, PretrainConfig, TrainConfig

if TYPE_CHECKING:
    from numpy.typing import ArrayLike

__all__ = (
    "SampleBuilder",
    "tiny_corpus",
    "tiny_corpus_config",
    "tiny_experiment_config",
    "tiny_model_config",
    "tiny_pretrain_config",
    "tiny_train_config",
)


def tiny_corpus_config(**overrides: Any) -> CorpusConfig:
    """32x32 tiles with a handful of nuclei; fast enough for unit tests."""
    settings: dict[str, Any] = {
        "num_samples": 10,
        "height": 32,
        "width": 32,
        "nuclei_min": 4,
        "nuclei_max": 8,
        "seed": 3,
    }
    settings.update(overrides)
    return CorpusConfig(**settings)


def tiny_corpus(**overrides: Any) -> Corpus:
    return build_corpus(tiny_corpus_config(**overrides), workers=2)


def tiny_model_config(**overrides: Any) -> ModelConfig:
    settings: dict[str, Any] = {
        "backbone": BackboneConfig(stage_channels=(4, 4, 8, 8), channels=8, num_classes=3),
        "width": 8,
        "link_dim": 4,
        "k": 2,
        "layers": 1,
        "heads": 2,
        "ffn_multiplier": 2,
    }
    settings.update(overrides)
    return ModelConfig(**settings)


def tiny_train_config(**overrides: Any) -> TrainConfig:
    return replace(TrainConfig(epochs=1, lr=1e-3, batch_accum=2, seeds=(0,)), **overrides)


def tiny_pretrain_config(**overrides: Any) -> PretrainConfig:
    return replace(PretrainConfig(epochs=1, lr=1e-3, batch_accum=2, gcn_width=8, seeds=(0,)), **overrides)


def tiny_experiment_config() -> ExperimentConfig:
    """Every section at unit-test size; written to disk as a CLI `--config` file."""
    return ExperimentConfig(
        corpus=tiny_corpus_config(),
        model=tiny_model_config(),
        pretrain=tiny_pretrain_config(),
        finetune=tiny_train_config(),
    )


class SampleBuilder:
    @staticmethod
    def build(
        centroids: ArrayLike = ((8.0, 8.0), (20.0, 10.0), (12.0, 22.0)),
        labels: ArrayLike | None = None,
        *,
        size: int = 32,
        num_classes: int = 3,
        sample_id: str = "s00000",
        seed: int = 0,
    ) -> Sample:
        """Random image with a background mask; each centroid's mask cell carries its label."""
        points = np.asarray(centroids, dtype=np.float64).reshape(-1, 2)
        classes = np.arange(len(points)) % num_classes if labels is None else np.asarray(labels)
        rng = np.random.default_rng(seed)
        mask = np.full((size // 4, size // 4), num_classes, dtype=np.int64)
        for (x, y), label in zip(points, classes, strict=True):
            mask[min(int(y) // 4, size // 4 - 1), min(int(x) // 4, size // 4 - 1)] = label
        return Sample(
            sample_id=sample_id,
            image=np.round(rng.uniform(size=(3, size, size)) * 255) / 255,
            centroids=points,
            labels=classes.astype(np.int64),
            mask=mask,
        )
