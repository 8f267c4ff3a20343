from __future__ import annotations

import os
from functools import partial
from typing import TYPE_CHECKING

import anyio
import anyio.to_thread

from cellgt.data.generator import generate_sample
from cellgt.data.split import split
from cellgt.exceptions import ConfigurationError
from cellgt.logging import Logger, NullLogger

if TYPE_CHECKING:
    from anyio.streams.memory import MemoryObjectSendStream

    from cellgt.data.config import CorpusConfig
    from cellgt.data.sample import Sample
    from cellgt.data.split import Corpus

__all__ = (
    "THREADS_ENV_VAR",
    "build_corpus",
    "generate_samples",
    "generate_samples_async",
    "worker_count",
)

THREADS_ENV_VAR = "CGT_THREADS"


def worker_count() -> int:
    """Generation workers: ``CGT_THREADS`` when set, else the CPU count."""
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return max(1, os.cpu_count() or 1)
    try:
        value = int(raw)
    except ValueError:
        raise ConfigurationError(f"expected an integer, got {raw!r}", field=THREADS_ENV_VAR) from None
    if value < 1:
        raise ConfigurationError(f"must be >= 1, got {value}", field=THREADS_ENV_VAR)
    return value


async def generate_samples_async(
    config: CorpusConfig, *, workers: int, logger: Logger | None = None
) -> list[Sample]:
    """Generate ``config.num_samples`` samples on a thread pool of ``workers``.

    Finished samples are handed to a single collector over a memory object
    stream; producers never touch a sample after sending it. Output order
    follows the sample index, independent of completion order.
    """
    log = logger or NullLogger()
    limiter = anyio.CapacityLimiter(workers)
    send_stream, receive_stream = anyio.create_memory_object_stream[tuple[int, "Sample"]](max_buffer_size=workers)
    collected: dict[int, Sample] = {}

    async def produce(index: int, stream: MemoryObjectSendStream[tuple[int, Sample]]) -> None:
        async with stream:
            sample = await anyio.to_thread.run_sync(partial(generate_sample, config, index), limiter=limiter)
            await stream.send((index, sample))

    async def collect() -> None:
        async with receive_stream:
            async for index, sample in receive_stream:
                collected[index] = sample
                log.debug("corpus.sample.generated", sample_id=sample.sample_id, nuclei=sample.num_nuclei)

    async with anyio.create_task_group() as tg:
        tg.start_soon(collect)
        async with send_stream:
            for index in range(config.num_samples):
                tg.start_soon(produce, index, send_stream.clone())

    return [collected[i] for i in range(config.num_samples)]


def generate_samples(config: CorpusConfig, *, workers: int | None = None, logger: Logger | None = None) -> list[Sample]:
    return anyio.run(
        partial(generate_samples_async, config, workers=workers or worker_count(), logger=logger),
        backend="asyncio",
    )


def build_corpus(config: CorpusConfig, *, workers: int | None = None, logger: Logger | None = None) -> Corpus:
    """Generate and split a whole corpus; split fractions and seed come from ``config``."""
    log = logger or NullLogger()
    samples = generate_samples(config, workers=workers, logger=log)
    corpus = split(samples, config.fractions, config.seed, num_classes=config.num_classes, logger=log)
    corpus.config = config.to_dict()
    log.info("corpus.generated", samples=len(samples), class_frequencies=corpus.train_class_frequencies)
    return corpus
