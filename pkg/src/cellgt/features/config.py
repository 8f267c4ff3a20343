from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Any

from cellgt.exceptions import ConfigurationError

__all__ = ("BackboneConfig",)


@dataclass(kw_only=True)
class BackboneConfig:
    """Widths of the stride-4 feature extractor.

    ``stage_channels`` are the four encoder stage widths; ``channels`` is the
    width of the feature map ``f`` (second-to-last layer); the segmentation
    head predicts ``num_classes + 1`` maps (background last).
    """

    stage_channels: tuple[int, int, int, int] = (8, 16, 16, 32)
    channels: int = 32
    num_classes: int = 3
    in_channels: int = 3

    def __post_init__(self) -> None:
        self.stage_channels = tuple(int(c) for c in self.stage_channels)  # type: ignore[assignment]
        if len(self.stage_channels) != 4 or min(self.stage_channels) < 1:
            raise ConfigurationError(
                f"expected four positive stage widths, got {self.stage_channels}", field="stage_channels"
            )
        if self.channels < 8 or self.channels % 4:
            raise ConfigurationError(f"channels must be a multiple of 4 and >= 8, got {self.channels}", field="channels")
        if self.num_classes < 1:
            raise ConfigurationError(f"num_classes must be >= 1, got {self.num_classes}", field="num_classes")
        if self.in_channels < 1:
            raise ConfigurationError(f"in_channels must be >= 1, got {self.in_channels}", field="in_channels")

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["stage_channels"] = list(self.stage_channels)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> BackboneConfig:
        unknown = sorted(set(data) - set(cls.__dataclass_fields__))
        if unknown:
            raise ConfigurationError(f"unknown backbone setting {unknown[0]!r}", field=unknown[0])
        known = dict(data)
        if "stage_channels" in known:
            known["stage_channels"] = tuple(known["stage_channels"])
        return cls(**known)
