from .checkpoint import CHECKPOINT_MAGIC, CHECKPOINT_VERSION, Checkpoint, load_into
from .config import (
    CLASSIFIERS,
    INSTANCE_HEADS,
    STAGE_DEFAULTS,
    SWEEP_AXES,
    AdamConfig,
    ModelConfig,
    PretrainConfig,
    SweepConfig,
    TrainConfig,
)
from .curves import CurveLog
from .evaluate import SplitEvaluation, evaluate, evaluate_model
from .finetune import FinetuneResult, run_finetune
from .loop import EpochStats, run_epoch
from .model import CGTModel, GraphCache, ModelState, SampleGraph, maybe_flip
from .optimizer import Adam
from .pretrain import PretrainResult, build_instance_head, run_pretrain
from .sweep import SweepCell, SweepRow, SweepTable, apply_setting, run_sweep_cell, sweep

__all__ = [
    "CHECKPOINT_MAGIC",
    "CHECKPOINT_VERSION",
    "CLASSIFIERS",
    "INSTANCE_HEADS",
    "STAGE_DEFAULTS",
    "SWEEP_AXES",
    "Adam",
    "AdamConfig",
    "CGTModel",
    "Checkpoint",
    "CurveLog",
    "EpochStats",
    "FinetuneResult",
    "GraphCache",
    "ModelConfig",
    "ModelState",
    "PretrainConfig",
    "PretrainResult",
    "SampleGraph",
    "SplitEvaluation",
    "SweepCell",
    "SweepConfig",
    "SweepRow",
    "SweepTable",
    "TrainConfig",
    "apply_setting",
    "build_instance_head",
    "evaluate",
    "evaluate_model",
    "load_into",
    "maybe_flip",
    "run_epoch",
    "run_finetune",
    "run_pretrain",
    "run_sweep_cell",
    "sweep",
]
