from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from cellgt.cgt import class_weights
from cellgt.features import EXTRACTOR_PREFIX, FeatureExtractor
from cellgt.gcnpre import (
    GCNHead,
    LinearInstanceHead,
    PretrainWeights,
    TransformerInstanceHead,
    pretrain_losses,
    pretrain_step,
)
from cellgt.gradcore import ParameterSet
from cellgt.logging import Logger, NullLogger
from cellgt.train.checkpoint import Checkpoint
from cellgt.train.config import ModelConfig, PretrainConfig
from cellgt.train.curves import CurveLog
from cellgt.train.loop import run_epoch
from cellgt.train.model import GraphCache, maybe_flip
from cellgt.train.optimizer import Adam
from cellgt.utils import make_rng, rng_state

if TYPE_CHECKING:
    import numpy as np

    from cellgt.data import Corpus, Sample
    from cellgt.gcnpre import InstanceHead

__all__ = (
    "PretrainResult",
    "build_instance_head",
    "run_pretrain",
)


@dataclass(frozen=True)
class PretrainResult:
    checkpoint: Checkpoint
    curve: CurveLog
    best_val_loss: float | None


def build_instance_head(
    config: PretrainConfig, model_config: ModelConfig, params: ParameterSet, rng: np.random.Generator
) -> InstanceHead:
    c_f = model_config.backbone.channels
    if config.instance_head == "linear":
        return LinearInstanceHead.create(params, rng, node_in=2 * c_f, num_classes=model_config.num_classes)
    if config.instance_head == "transformer":
        return TransformerInstanceHead.create(
            params,
            rng,
            node_in=2 * c_f,
            width=config.gcn_width,
            num_classes=model_config.num_classes,
            layers=config.gcn_layers,
            heads=model_config.heads,
        )
    return GCNHead.create(
        params,
        rng,
        node_in=2 * c_f,
        edge_in=c_f,
        width=config.gcn_width,
        num_classes=model_config.num_classes,
        layers=config.gcn_layers,
    )


def run_pretrain(
    corpus: Corpus,
    model_config: ModelConfig,
    config: PretrainConfig,
    *,
    logger: Logger | None = None,
    curve: CurveLog | None = None,
) -> PretrainResult:
    """Train extractor and instance head jointly; keep the extractor weights with the lowest validation loss.

    The returned checkpoint only holds ``extractor.*`` tensors; the instance
    head and its input projections are discarded.
    """
    log = (logger or NullLogger()).bind(stage="pretrain", seed=config.seed)
    curve = curve if curve is not None else CurveLog()
    init_rng = make_rng(config.seed)
    order_rng = make_rng(config.seed, 1)

    params = ParameterSet()
    extractor = FeatureExtractor.create(model_config.backbone, params, init_rng)
    head = build_instance_head(config, model_config, params, init_rng)
    weights = PretrainWeights(
        tau=class_weights(corpus.train_class_frequencies),
        gamma=model_config.gamma,
        lambda_dice=config.lambda_dice,
        lambda_ce=config.lambda_ce,
    )
    graphs = GraphCache(k=model_config.k, link_dim=0)
    optimizer = Adam(params, config.learning_rate, config.adam)

    def step_fn(sample: Sample, scale: float) -> dict[str, float]:
        flipped, flips = maybe_flip(sample, order_rng, config.flips)
        losses = pretrain_step(flipped, graphs.get(flipped, flips).graph, extractor, head, weights, scale=scale)
        return losses.as_floats()

    def validation_loss() -> float | None:
        if not corpus.val:
            return None
        total = sum(
            pretrain_losses(s, graphs.get(s).graph, extractor, head, weights).total.item() for s in corpus.val
        )
        return total / len(corpus.val)

    best = params.subset(EXTRACTOR_PREFIX).snapshot()
    best_val: float | None = None
    step = 0
    log.info(
        "pretrain.start",
        epochs=config.num_epochs,
        lr=config.learning_rate,
        samples=len(corpus.train),
        instance_head=config.instance_head,
        parameters=params.num_scalars(),
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
            stage="pretrain",
            logger=log,
        )
        step = stats.steps
        val_loss = validation_loss()
        if val_loss is not None and not math.isfinite(val_loss):
            val_loss = math.inf
        if val_loss is None or best_val is None or val_loss < best_val:
            best = params.subset(EXTRACTOR_PREFIX).snapshot()
            best_val = val_loss
        record = {"stage": "pretrain", "epoch": epoch, "step": step, **stats.losses, "val_loss": val_loss}
        curve.append(record)
        log.info(
            "pretrain.epoch.complete", epoch=epoch, step=step, loss=stats.losses.get("total", 0.0), val_loss=val_loss
        )

    checkpoint = Checkpoint(
        config={"stage": "pretrain", "model": model_config.to_dict(), "pretrain": config.to_dict()},
        tensors=best,
        step=step,
        rng_state=rng_state(order_rng),
    )
    log.info("pretrain.complete", steps=step, best_val_loss=best_val)
    return PretrainResult(checkpoint=checkpoint, curve=curve, best_val_loss=best_val)
