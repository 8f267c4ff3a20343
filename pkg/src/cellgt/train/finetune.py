from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from cellgt.cgt import class_weights
from cellgt.exceptions import CheckpointError
from cellgt.features import EXTRACTOR_PREFIX
from cellgt.gradcore import Tape, mul
from cellgt.logging import Logger, NullLogger
from cellgt.train.checkpoint import Checkpoint, load_into
from cellgt.train.config import ModelConfig, TrainConfig
from cellgt.train.curves import CurveLog
from cellgt.train.evaluate import evaluate_model
from cellgt.train.loop import run_epoch
from cellgt.train.model import CGTModel, GraphCache, ModelState, maybe_flip
from cellgt.train.optimizer import Adam
from cellgt.utils import make_rng, rng_state

if TYPE_CHECKING:
    from cellgt.data import Corpus, Sample

__all__ = (
    "FinetuneResult",
    "run_finetune",
)


@dataclass(frozen=True)
class FinetuneResult:
    checkpoint: Checkpoint
    curve: CurveLog
    epoch1_val_loss: float | None
    best_val_f_avg: float | None


def _load_pretrained(state: ModelState, init: Checkpoint) -> None:
    extractor = init.subset(EXTRACTOR_PREFIX)
    if not extractor:
        raise CheckpointError("initialization checkpoint holds no feature extractor weights")
    load_into(state.params.subset(EXTRACTOR_PREFIX), extractor)


def run_finetune(
    corpus: Corpus,
    model_config: ModelConfig,
    config: TrainConfig,
    init: Checkpoint | None = None,
    *,
    logger: Logger | None = None,
    curve: CurveLog | None = None,
) -> FinetuneResult:
    """Train the whole classifier end to end on the node loss.

    ``init`` (a pretraining checkpoint) replaces the extractor's random
    initialization; everything else always starts from the seed. The weights
    with the best validation F_avg are kept.
    """
    log = (logger or NullLogger()).bind(stage="finetune", seed=config.seed)
    curve = curve if curve is not None else CurveLog()
    state = ModelState.create(model_config, make_rng(config.seed))
    if init is not None:
        _load_pretrained(state, init)
    order_rng = make_rng(config.seed, 1)

    model = CGTModel(state)
    tau = class_weights(corpus.train_class_frequencies)
    graphs = GraphCache.for_model(model_config)
    optimizer = Adam(state.params, config.learning_rate, config.adam)

    def step_fn(sample: Sample, scale: float) -> dict[str, float]:
        flipped, flips = maybe_flip(sample, order_rng, config.flips)
        with Tape() as tape:
            loss, _ = model.loss(flipped, graphs.get(flipped, flips), tau)
            objective = mul(loss, scale)
        tape.backward(objective)
        return {"total": loss.item()}

    best = state.snapshot()
    best_f: float | None = None
    epoch1_val_loss: float | None = None
    step = 0
    log.info(
        "finetune.start",
        epochs=config.num_epochs,
        lr=config.learning_rate,
        init="pretrained" if init is not None else "scratch",
        classifier=model_config.classifier,
        parameters=state.params.num_scalars(),
        samples=len(corpus.train),
    )
    for epoch in range(1, config.num_epochs + 1):
        stats = run_epoch(
            corpus.train,
            order_rng,
            optimizer,
            config.batch_accum,
            step_fn,
            step=step,
            seed=config.seed,
            stage="finetune",
            logger=log,
        )
        step = stats.steps
        record: dict[str, Any] = {
            "stage": "finetune",
            "epoch": epoch,
            "step": step,
            "loss": stats.losses.get("total"),
        }
        if corpus.val:
            evaluation = evaluate_model(model, corpus.val, graphs, tau, split_name="val")
            f_avg = evaluation.report.scores.f_avg
            record.update(val_loss=evaluation.loss, val_f_avg=f_avg)
            if epoch == 1:
                epoch1_val_loss = evaluation.loss
            if best_f is None or f_avg > best_f:
                best, best_f = state.snapshot(), f_avg
        else:
            best = state.snapshot()
        curve.append(record)
        log.info("finetune.epoch.complete", **record)

    checkpoint = Checkpoint(
        config={
            "stage": "finetune",
            "model": model_config.to_dict(),
            "finetune": config.to_dict(),
            "init": init.config_digest if init is not None else "scratch",
        },
        tensors=best,
        step=step,
        rng_state=rng_state(order_rng),
    )
    log.info("finetune.complete", steps=step, best_val_f_avg=best_f)
    return FinetuneResult(checkpoint=checkpoint, curve=curve, epoch1_val_loss=epoch1_val_loss, best_val_f_avg=best_f)
