from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import ConfigurationError, ContractError
from cellgt.logging import Logger, NullLogger
from cellgt.utils import make_rng

if TYPE_CHECKING:
    from cellgt.data.sample import Sample

__all__ = (
    "SPLIT_NAMES",
    "Corpus",
    "class_frequencies",
    "split",
    "split_sizes",
)

SPLIT_NAMES = ("train", "val", "test")


def class_frequencies(samples: Sequence[Sample], num_classes: int) -> list[int]:
    counts = np.zeros(num_classes, dtype=np.int64)
    for sample in samples:
        if sample.labels.size and sample.labels.max() >= num_classes:
            raise ContractError(f"sample {sample.sample_id} has class id >= {num_classes}")
        counts += np.bincount(sample.labels, minlength=num_classes)
    return [int(c) for c in counts]


@dataclass
class Corpus:
    """Samples grouped by split plus the train-split class-frequency table."""

    num_classes: int
    splits: dict[str, list[Sample]] = field(default_factory=lambda: {name: [] for name in SPLIT_NAMES})
    config: dict[str, object] = field(default_factory=dict)

    @property
    def train(self) -> list[Sample]:
        return self.splits["train"]

    @property
    def val(self) -> list[Sample]:
        return self.splits["val"]

    @property
    def test(self) -> list[Sample]:
        return self.splits["test"]

    @property
    def train_class_frequencies(self) -> list[int]:
        return class_frequencies(self.train, self.num_classes)

    def __len__(self) -> int:
        return sum(len(s) for s in self.splits.values())

    def find(self, sample_id: str) -> Sample | None:
        for samples in self.splits.values():
            for sample in samples:
                if sample.sample_id == sample_id:
                    return sample
        return None


def split_sizes(total: int, fractions: Sequence[float]) -> tuple[int, int, int]:
    if len(fractions) != 3 or min(fractions) < 0 or abs(sum(fractions) - 1.0) > 1e-9:
        raise ConfigurationError(
            f"fractions must be three non-negative numbers summing to 1, got {tuple(fractions)}", field="fractions"
        )
    n_val = min(total, round(fractions[1] * total))
    n_test = min(total - n_val, round(fractions[2] * total))
    return total - n_val - n_test, n_val, n_test


def split(
    samples: Sequence[Sample],
    fractions: Sequence[float],
    seed: int,
    *,
    num_classes: int,
    logger: Logger | None = None,
) -> Corpus:
    """Shuffle with ``seed`` and cut into train/val/test; empty splits only warn."""
    log = logger or NullLogger()
    sizes = split_sizes(len(samples), fractions)
    order = make_rng(seed, 0x5EED).permutation(len(samples))
    shuffled = [samples[int(i)] for i in order]
    bounds = np.cumsum([0, *sizes])
    corpus = Corpus(
        num_classes=num_classes,
        splits={name: shuffled[bounds[i] : bounds[i + 1]] for i, name in enumerate(SPLIT_NAMES)},
    )
    for name, size in zip(SPLIT_NAMES, sizes, strict=True):
        if size == 0:
            log.warning("corpus.split.empty", split=name, total=len(samples))
    log.info("corpus.split.complete", train=sizes[0], val=sizes[1], test=sizes[2])
    return corpus
