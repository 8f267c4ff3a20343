import json
from pathlib import Path

import numpy as np
import pytest

from cellgt.data import Corpus, CorpusConfig, Sample, write_corpus
from cellgt.testing.builders import (
    SampleBuilder,
    tiny_corpus,
    tiny_corpus_config,
    tiny_experiment_config,
    tiny_model_config,
)
from cellgt.testing.logger_spy import LoggerSpy
from cellgt.train import ModelConfig

__all__ = (
    "anyio_backend",
    "fx_config_file",
    "fx_corpus",
    "fx_corpus_config",
    "fx_corpus_dir",
    "fx_logger_spy",
    "fx_model_config",
    "fx_rng",
    "fx_sample",
)


@pytest.fixture(name="rng")
def fx_rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(name="logger_spy")
def fx_logger_spy() -> LoggerSpy:
    return LoggerSpy()


@pytest.fixture(name="sample")
def fx_sample() -> Sample:
    return SampleBuilder.build()


@pytest.fixture(name="corpus_config")
def fx_corpus_config() -> CorpusConfig:
    return tiny_corpus_config()


@pytest.fixture(name="model_config")
def fx_model_config() -> ModelConfig:
    return tiny_model_config()


@pytest.fixture(name="corpus", scope="session")
def fx_corpus() -> Corpus:
    return tiny_corpus()


@pytest.fixture(name="corpus_dir")
def fx_corpus_dir(corpus: Corpus, tmp_path: Path) -> Path:
    return write_corpus(corpus, tmp_path / "corpus")


@pytest.fixture(name="config_file")
def fx_config_file(tmp_path: Path) -> Path:
    path = tmp_path / "experiment.json"
    path.write_text(json.dumps(tiny_experiment_config().to_dict()), encoding="utf-8")
    return path


@pytest.fixture(
    params=[pytest.param("asyncio", id="asyncio")],
)
def anyio_backend(request: pytest.FixtureRequest) -> str:
    return str(request.param)
