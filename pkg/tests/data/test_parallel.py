import os

import pytest

from cellgt.data import THREADS_ENV_VAR, build_corpus, generate_sample, generate_samples_async, worker_count
from cellgt.exceptions import ConfigurationError

__all__ = (
    "TestParallelGeneration",
    "TestWorkerCount",
)


class TestWorkerCount:
    def test_env_var_wins(self, monkeypatch):
        monkeypatch.setenv(THREADS_ENV_VAR, "3")
        assert worker_count() == 3

    def test_defaults_to_cpu_count(self, monkeypatch):
        monkeypatch.delenv(THREADS_ENV_VAR, raising=False)
        assert worker_count() == max(1, os.cpu_count() or 1)

    @pytest.mark.parametrize("raw", ["many", "0", "-2"])
    def test_bad_values(self, monkeypatch, raw):
        monkeypatch.setenv(THREADS_ENV_VAR, raw)
        with pytest.raises(ConfigurationError) as info:
            worker_count()
        assert info.value.field == THREADS_ENV_VAR


class TestParallelGeneration:
    @pytest.mark.anyio
    async def test_worker_count_does_not_change_the_output(self, corpus_config):
        parallel = await generate_samples_async(corpus_config, workers=4)
        assert [s.sample_id for s in parallel] == [f"s{i:05d}" for i in range(corpus_config.num_samples)]
        assert all(s.same_as(generate_sample(corpus_config, i)) for i, s in enumerate(parallel))

    def test_build_corpus_logs_and_records_config(self, corpus_config, logger_spy):
        corpus = build_corpus(corpus_config, workers=1, logger=logger_spy)
        assert len(corpus) == corpus_config.num_samples
        assert corpus.config == corpus_config.to_dict()
        assert "corpus.generated" in logger_spy.events("info")
        assert logger_spy.events("debug").count("corpus.sample.generated") == corpus_config.num_samples
