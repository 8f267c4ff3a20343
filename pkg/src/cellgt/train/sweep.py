from __future__ import annotations

from dataclasses import dataclass, replace
from functools import partial
from typing import TYPE_CHECKING, Any

import anyio
import anyio.to_process
import numpy as np

from cellgt.logging import Logger, NullLogger
from cellgt.train.config import ModelConfig, PretrainConfig, SweepConfig, TrainConfig
from cellgt.train.evaluate import evaluate
from cellgt.train.finetune import run_finetune
from cellgt.train.pretrain import run_pretrain

if TYPE_CHECKING:
    from cellgt.data import Corpus
    from cellgt.metrics import FScores

__all__ = (
    "SweepCell",
    "SweepRow",
    "SweepTable",
    "apply_setting",
    "run_sweep_cell",
    "sweep",
)


@dataclass(frozen=True)
class SweepCell:
    """One (setting, seed) pipeline run: optional pretraining, finetuning, test evaluation."""

    corpus: Corpus
    model: ModelConfig
    pretrain: PretrainConfig
    finetune: TrainConfig
    init: str
    seed: int


@dataclass(frozen=True)
class SweepRow:
    setting: str
    per_class_f: list[float]
    f_avg: float
    seed_f_avg: list[float]

    def to_dict(self) -> dict[str, Any]:
        return {
            "setting": self.setting,
            "per_class_f": self.per_class_f,
            "f_avg": self.f_avg,
            "seed_f_avg": self.seed_f_avg,
        }


@dataclass(frozen=True)
class SweepTable:
    axis: str
    seeds: list[int]
    rows: list[SweepRow]

    @property
    def num_cells(self) -> int:
        """Per-class F columns plus the F_avg column, for every row."""
        return sum(len(row.per_class_f) + 1 for row in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {"axis": self.axis, "seeds": self.seeds, "rows": [row.to_dict() for row in self.rows]}

    def summary(self) -> str:
        lines = [f"{self.axis:>8}  " + "  ".join(f"F{b}" for b in range(len(self.rows[0].per_class_f))) + "  F_avg"]
        for row in self.rows:
            per_class = "  ".join(f"{f:.4f}" for f in row.per_class_f)
            lines.append(f"{row.setting:>8}  {per_class}  {row.f_avg:.4f}")
        return "\n".join(lines)


def apply_setting(
    axis: str, value: str, model: ModelConfig, pretrain: PretrainConfig, finetune: TrainConfig, init: str
) -> tuple[ModelConfig, PretrainConfig, TrainConfig, str]:
    """Configs for one axis value.

    ``E`` sets the neighbours per node used by both stages; ``pretrain_head``
    swaps the pretraining instance head and always pretrains first.
    """
    if axis == "L":
        return replace(model, layers=int(value)), pretrain, finetune, init
    if axis == "E":
        return replace(model, k=int(value)), pretrain, finetune, init
    if axis == "tokens":
        return replace(model, tokenization=value), pretrain, finetune, init  # type: ignore[arg-type]
    if axis == "classifier":
        return replace(model, classifier=value), pretrain, finetune, init  # type: ignore[arg-type]
    if axis == "pretrain_head":
        return model, replace(pretrain, instance_head=value), finetune, "tap"  # type: ignore[arg-type]
    return model, pretrain, finetune, value


def run_sweep_cell(cell: SweepCell) -> FScores:
    pretrain_cfg = replace(cell.pretrain, seed=cell.seed)
    finetune_cfg = replace(cell.finetune, seed=cell.seed)
    init = run_pretrain(cell.corpus, cell.model, pretrain_cfg).checkpoint if cell.init == "tap" else None
    result = run_finetune(cell.corpus, cell.model, finetune_cfg, init)
    return evaluate(result.checkpoint, cell.corpus.test, split_name="test").scores


async def _run_cells_async(cells: list[SweepCell], workers: int) -> list[FScores]:
    limiter = anyio.CapacityLimiter(workers)
    results: list[FScores | None] = [None] * len(cells)

    async def run(index: int) -> None:
        results[index] = await anyio.to_process.run_sync(run_sweep_cell, cells[index], limiter=limiter)

    async with anyio.create_task_group() as tg:
        for index in range(len(cells)):
            tg.start_soon(run, index)
    return [r for r in results if r is not None]


def sweep(
    corpus: Corpus,
    model: ModelConfig,
    pretrain: PretrainConfig,
    finetune: TrainConfig,
    config: SweepConfig,
    *,
    logger: Logger | None = None,
) -> SweepTable:
    """Run the pipeline for every axis value and seed; rows hold seed means.

    With ``config.workers > 1`` the cells run in worker processes; results
    are collected by position, so the table does not depend on scheduling.
    """
    log = (logger or NullLogger()).bind(axis=config.axis)
    seeds = list(finetune.seeds)
    cells = []
    for value in config.values:
        m, p, f, init = apply_setting(config.axis, value, model, pretrain, finetune, config.init)
        cells.extend(SweepCell(corpus=corpus, model=m, pretrain=p, finetune=f, init=init, seed=s) for s in seeds)

    log.info("sweep.start", settings=len(config.values), seeds=len(seeds), workers=config.workers)
    if config.workers > 1:
        scores = anyio.run(partial(_run_cells_async, cells, config.workers), backend="asyncio")
    else:
        scores = []
        for cell in cells:
            scores.append(run_sweep_cell(cell))
            log.info("sweep.cell.complete", seed=cell.seed, f_avg=scores[-1].f_avg)

    rows = []
    for i, value in enumerate(config.values):
        chunk = scores[i * len(seeds) : (i + 1) * len(seeds)]
        rows.append(
            SweepRow(
                setting=value,
                per_class_f=[float(v) for v in np.mean([s.per_class for s in chunk], axis=0)],
                f_avg=float(np.mean([s.f_avg for s in chunk])),
                seed_f_avg=[s.f_avg for s in chunk],
            )
        )
        log.info("sweep.setting.complete", setting=value, f_avg=rows[-1].f_avg)
    return SweepTable(axis=config.axis, seeds=seeds, rows=rows)
