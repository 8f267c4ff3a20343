from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from cellgt.data import CorpusConfig
from cellgt.exceptions import ConfigurationError
from cellgt.train import ModelConfig, PretrainConfig, SweepConfig, TrainConfig

__all__ = (
    "EXPERIMENT_SECTIONS",
    "ExperimentConfig",
    "load_experiment_config",
)


EXPERIMENT_SECTIONS = ("corpus", "model", "pretrain", "finetune", "sweep")


@dataclass(kw_only=True)
class ExperimentConfig:
    """Every section a command may need, with all defaults materialized."""

    corpus: CorpusConfig = field(default_factory=CorpusConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    pretrain: PretrainConfig = field(default_factory=PretrainConfig)
    finetune: TrainConfig = field(default_factory=TrainConfig)
    sweep: SweepConfig = field(default_factory=SweepConfig)

    def to_dict(self) -> dict[str, Any]:
        return {
            "corpus": self.corpus.to_dict(),
            "model": self.model.to_dict(),
            "pretrain": self.pretrain.to_dict(),
            "finetune": self.finetune.to_dict(),
            "sweep": self.sweep.to_dict(),
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ExperimentConfig:
        unknown = sorted(set(data) - set(EXPERIMENT_SECTIONS))
        if unknown:
            raise ConfigurationError(f"unknown config sections {unknown}", field=unknown[0])
        for name in EXPERIMENT_SECTIONS:
            if not isinstance(data.get(name, {}), dict):
                raise ConfigurationError("section must be an object", field=name)
        return cls(
            corpus=CorpusConfig.from_dict(data.get("corpus", {})),
            model=ModelConfig.from_dict(data.get("model", {})),
            pretrain=PretrainConfig.from_dict(data.get("pretrain", {})),
            finetune=TrainConfig.from_dict(data.get("finetune", {})),
            sweep=SweepConfig.from_dict(data.get("sweep", {})),
        )


def load_experiment_config(path: str | Path | None) -> ExperimentConfig:
    """Read a JSON config file; ``None`` gives the defaults. Missing sections take their defaults."""
    if path is None:
        return ExperimentConfig()
    source = Path(path)
    if not source.is_file():
        raise FileNotFoundError(f"config file not found: {source}")
    try:
        data = json.loads(source.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"invalid JSON in {source} ({exc.msg})", field="config") from exc
    if not isinstance(data, dict):
        raise ConfigurationError(f"{source} must hold a JSON object", field="config")
    return ExperimentConfig.from_dict(data)
