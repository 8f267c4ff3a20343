from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from typing import Any, ClassVar, Literal, TypeVar

from cellgt.exceptions import ConfigurationError
from cellgt.features import BackboneConfig

__all__ = (
    "CLASSIFIERS",
    "INSTANCE_HEADS",
    "STAGE_DEFAULTS",
    "SWEEP_AXES",
    "AdamConfig",
    "ModelConfig",
    "PretrainConfig",
    "SweepConfig",
    "TrainConfig",
)

# (epochs, learning rate) per stage
STAGE_DEFAULTS: dict[str, tuple[int, float]] = {
    "pretrain": (150, 1e-4),
    "finetune": (50, 1e-5),
}

CLASSIFIERS = ("transformer", "linear", "gcn")
INSTANCE_HEADS = ("gcn", "linear", "transformer")

_T = TypeVar("_T")


def _known(cls: type[Any], data: dict[str, Any], section: str) -> dict[str, Any]:
    names = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - names)
    if unknown:
        raise ConfigurationError(f"unknown {section} setting {unknown[0]!r}", field=unknown[0])
    return dict(data)


@dataclass(kw_only=True)
class AdamConfig:
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    def __post_init__(self) -> None:
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise ConfigurationError("Adam betas must lie in [0, 1)", field="adam")
        if self.eps <= 0:
            raise ConfigurationError("Adam eps must be > 0", field="adam")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AdamConfig:
        return cls(**_known(cls, data, "adam"))


@dataclass(kw_only=True)
class ModelConfig:
    """Architecture of the cell graph transformer.

    ``width`` is the token-marker and model width C; ``link_dim`` is c_l;
    ``k`` neighbours per node build the cell graph for both stages.

    ``classifier`` picks what sits on the extractor: the transformer encoder
    (fed by ``tokenization``), a single linear layer over the sampled node
    features, or a GCN with ``gcn_layers`` message-passing rounds over the
    cell graph. ``tokenization`` only matters for the transformer.
    """

    backbone: BackboneConfig = field(default_factory=BackboneConfig)
    width: int = 64
    link_dim: int = 16
    k: int = 4
    layers: int = 4
    heads: int = 4
    ffn_multiplier: int = 4
    classifier: Literal["transformer", "linear", "gcn"] = "transformer"
    tokenization: Literal["cgtoken", "nodes"] = "cgtoken"
    gcn_layers: int = 2
    marker_std: float = 0.02
    gamma: float = 2.0

    def __post_init__(self) -> None:
        if self.width < 1 or self.heads < 1 or self.width % self.heads:
            raise ConfigurationError(
                f"width {self.width} must be a positive multiple of heads {self.heads}", field="width"
            )
        if self.link_dim < 0:
            raise ConfigurationError(f"link_dim must be >= 0, got {self.link_dim}", field="link_dim")
        if self.k < 1:
            raise ConfigurationError(f"k must be >= 1, got {self.k}", field="k")
        if self.layers < 1:
            raise ConfigurationError(f"layers must be >= 1, got {self.layers}", field="layers")
        if self.ffn_multiplier < 1:
            raise ConfigurationError("ffn_multiplier must be >= 1", field="ffn_multiplier")
        if self.tokenization not in ("cgtoken", "nodes"):
            raise ConfigurationError(f"unknown tokenization {self.tokenization!r}", field="tokenization")
        if self.classifier not in CLASSIFIERS:
            raise ConfigurationError(f"unknown classifier {self.classifier!r}", field="classifier")
        if self.gcn_layers < 1:
            raise ConfigurationError(f"gcn_layers must be >= 1, got {self.gcn_layers}", field="gcn_layers")
        if self.marker_std < 0 or self.gamma < 0:
            raise ConfigurationError("marker_std and gamma must be >= 0", field="gamma")

    @property
    def num_classes(self) -> int:
        return self.backbone.num_classes

    @property
    def uses_link_markers(self) -> bool:
        return self.classifier == "transformer" and self.tokenization == "cgtoken" and self.link_dim > 0

    @property
    def token_width(self) -> int:
        return 3 * self.width if self.tokenization == "cgtoken" else self.width

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["backbone"] = self.backbone.to_dict()
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ModelConfig:
        known = _known(cls, data, "model")
        if "backbone" in known:
            known["backbone"] = BackboneConfig.from_dict(known["backbone"])
        return cls(**known)


@dataclass(kw_only=True)
class TrainConfig:
    """One training stage; ``epochs``/``lr`` left unset take the stage defaults."""

    section: ClassVar[str] = "finetune"

    stage: Literal["pretrain", "finetune"] = "finetune"
    epochs: int | None = None
    lr: float | None = None
    adam: AdamConfig = field(default_factory=AdamConfig)
    batch_accum: int = 4
    seed: int = 0
    seeds: tuple[int, ...] = (0, 1, 2)
    flips: bool = False

    def __post_init__(self) -> None:
        if self.stage not in STAGE_DEFAULTS:
            raise ConfigurationError(f"unknown stage {self.stage!r}", field="stage")
        default_epochs, default_lr = STAGE_DEFAULTS[self.stage]
        if self.epochs is None:
            self.epochs = default_epochs
        if self.lr is None:
            self.lr = default_lr
        if self.epochs < 0:
            raise ConfigurationError(f"epochs must be >= 0, got {self.epochs}", field="epochs")
        if self.lr <= 0:
            raise ConfigurationError(f"lr must be > 0, got {self.lr}", field="lr")
        if self.batch_accum < 1:
            raise ConfigurationError(f"batch_accum must be >= 1, got {self.batch_accum}", field="batch_accum")
        self.seeds = tuple(int(s) for s in self.seeds)
        if not self.seeds:
            raise ConfigurationError("at least one seed is required", field="seeds")

    @property
    def num_epochs(self) -> int:
        assert self.epochs is not None
        return self.epochs

    @property
    def learning_rate(self) -> float:
        assert self.lr is not None
        return self.lr

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["adam"] = self.adam.to_dict()
        data["seeds"] = list(self.seeds)
        return data

    @classmethod
    def from_dict(cls: type[_T], data: dict[str, Any]) -> _T:
        known = _known(cls, data, cls.section)  # type: ignore[attr-defined]
        if "adam" in known:
            known["adam"] = AdamConfig.from_dict(known["adam"])
        if "seeds" in known:
            known["seeds"] = tuple(known["seeds"])
        return cls(**known)


@dataclass(kw_only=True)
class PretrainConfig(TrainConfig):
    """Topology-aware pretraining: an instance head plus Dice and pixel CE.

    ``instance_head`` is the GCN over the cell graph by default; ``linear``
    and ``transformer`` (node tokens only, no graph) are the graph-free
    alternatives. ``gcn_width`` and ``gcn_layers`` size whichever head is used.
    """

    section: ClassVar[str] = "pretrain"

    stage: Literal["pretrain", "finetune"] = "pretrain"
    instance_head: Literal["gcn", "linear", "transformer"] = "gcn"
    gcn_width: int = 32
    gcn_layers: int = 2
    lambda_dice: float = 1.0
    lambda_ce: float = 1.0

    def __post_init__(self) -> None:
        super().__post_init__()
        if self.stage != "pretrain":
            raise ConfigurationError("PretrainConfig is for the pretrain stage", field="stage")
        if self.instance_head not in INSTANCE_HEADS:
            raise ConfigurationError(f"unknown instance_head {self.instance_head!r}", field="instance_head")
        if self.gcn_width < 1 or self.gcn_layers < 1:
            raise ConfigurationError("gcn_width and gcn_layers must be >= 1", field="gcn_width")
        if self.lambda_dice < 0 or self.lambda_ce < 0:
            raise ConfigurationError("loss weights must be >= 0", field="lambda_dice")


SWEEP_AXES: dict[str, tuple[str, ...] | None] = {
    "L": None,
    "E": None,
    "tokens": ("cgtoken", "nodes"),
    "init": ("scratch", "tap"),
    "classifier": CLASSIFIERS,
    "pretrain_head": INSTANCE_HEADS,
}


@dataclass(kw_only=True)
class SweepConfig:
    """Which hyperparameter to vary and over which values; every setting runs once per seed."""

    axis: Literal["L", "E", "tokens", "init", "classifier", "pretrain_head"] = "L"
    values: tuple[str, ...] = ("1", "2", "3", "4")
    init: Literal["scratch", "tap"] = "tap"
    workers: int = 1

    def __post_init__(self) -> None:
        if self.axis not in SWEEP_AXES:
            raise ConfigurationError(f"unknown sweep axis {self.axis!r}", field="axis")
        self.values = tuple(str(v).strip() for v in self.values)
        if not self.values:
            raise ConfigurationError("sweep needs at least one value", field="values")
        choices = SWEEP_AXES[self.axis]
        for value in self.values:
            if choices is None:
                if not value.isdigit() or int(value) < 1:
                    raise ConfigurationError(
                        f"axis {self.axis} takes positive integers, got {value!r}", field="values"
                    )
            elif value not in choices:
                raise ConfigurationError(f"axis {self.axis} takes one of {choices}, got {value!r}", field="values")
        if self.init not in ("scratch", "tap"):
            raise ConfigurationError(f"unknown init {self.init!r}", field="init")
        if self.workers < 1:
            raise ConfigurationError("workers must be >= 1", field="workers")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["values"] = list(self.values)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SweepConfig:
        known = _known(cls, data, "sweep")
        if "values" in known:
            known["values"] = tuple(known["values"])
        return cls(**known)
