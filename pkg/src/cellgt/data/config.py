from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

from cellgt.exceptions import ConfigurationError

__all__ = (
    "DEFAULT_PALETTE",
    "CorpusConfig",
)

# Stain-like nucleus colours (RGB in [0, 1]); classes beyond the palette need explicit colours.
DEFAULT_PALETTE: tuple[tuple[float, float, float], ...] = (
    (0.36, 0.16, 0.46),
    (0.58, 0.24, 0.40),
    (0.28, 0.30, 0.58),
    (0.46, 0.34, 0.22),
    (0.20, 0.42, 0.36),
    (0.62, 0.44, 0.56),
)


@dataclass(kw_only=True)
class CorpusConfig:
    """Synthetic corpus recipe.

    Nuclei are soft-edged blobs; with probability ``beta_cluster`` a new
    nucleus copies the class of its nearest already-placed neighbour,
    otherwise its class is drawn from ``class_priors``.
    """

    num_samples: int = 100
    height: int = 64
    width: int = 64
    nuclei_min: int = 20
    nuclei_max: int = 60
    num_classes: int = 3
    radius_min: float = 2.5
    radius_max: float = 4.0
    softness: float = 0.6
    class_colors: tuple[tuple[float, float, float], ...] | None = None
    class_priors: tuple[float, ...] | None = None
    appearance_std: float = 0.08
    background: tuple[float, float, float] = (0.93, 0.80, 0.86)
    noise_std: float = 0.02
    beta_cluster: float = 0.6
    label_noise: float = 0.0
    d_min: float = 6.0
    margin: float = 2.0
    max_retries: int = 500
    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.num_samples < 0:
            raise ConfigurationError(f"num_samples must be >= 0, got {self.num_samples}", field="num_samples")
        if self.height < 4 or self.width < 4 or self.height % 4 or self.width % 4:
            raise ConfigurationError(
                f"image sides must be positive multiples of 4, got {self.height}x{self.width}", field="height"
            )
        if not 1 <= self.nuclei_min <= self.nuclei_max:
            raise ConfigurationError(
                f"need 1 <= nuclei_min <= nuclei_max, got {self.nuclei_min}..{self.nuclei_max}", field="nuclei_min"
            )
        if self.num_classes < 1:
            raise ConfigurationError(f"num_classes must be >= 1, got {self.num_classes}", field="num_classes")
        if not 0 < self.radius_min <= self.radius_max:
            raise ConfigurationError("need 0 < radius_min <= radius_max", field="radius_min")
        if self.softness <= 0:
            raise ConfigurationError("softness must be > 0", field="softness")
        if not 0.0 <= self.beta_cluster <= 1.0:
            raise ConfigurationError(f"beta_cluster must lie in [0, 1], got {self.beta_cluster}", field="beta_cluster")
        if not 0.0 <= self.label_noise < 1.0:
            raise ConfigurationError(f"label_noise must lie in [0, 1), got {self.label_noise}", field="label_noise")
        # two centroids may never share a stride-4 mask cell
        if self.d_min <= 4.0 * math.sqrt(2.0):
            raise ConfigurationError(f"d_min must exceed 4*sqrt(2), got {self.d_min}", field="d_min")
        if self.margin < 0 or 2 * self.margin >= min(self.height, self.width):
            raise ConfigurationError("margin leaves no room for nuclei", field="margin")
        if self.max_retries < 1:
            raise ConfigurationError("max_retries must be >= 1", field="max_retries")

        self.fractions = tuple(float(f) for f in self.fractions)  # type: ignore[assignment]
        if len(self.fractions) != 3 or min(self.fractions) < 0 or abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ConfigurationError(
                f"fractions must be three non-negative numbers summing to 1, got {self.fractions}", field="fractions"
            )

        if self.class_colors is None:
            if self.num_classes > len(DEFAULT_PALETTE):
                raise ConfigurationError(
                    f"{self.num_classes} classes need explicit class_colors", field="class_colors"
                )
            self.class_colors = DEFAULT_PALETTE[: self.num_classes]
        self.class_colors = tuple(tuple(float(v) for v in c) for c in self.class_colors)  # type: ignore[misc]
        if len(self.class_colors) != self.num_classes or any(len(c) != 3 for c in self.class_colors):
            raise ConfigurationError("class_colors needs one RGB triple per class", field="class_colors")

        if self.class_priors is None:
            raw = [1.0 / (b + 1) for b in range(self.num_classes)]
            self.class_priors = tuple(r / sum(raw) for r in raw)
        self.class_priors = tuple(float(p) for p in self.class_priors)
        if len(self.class_priors) != self.num_classes or min(self.class_priors) < 0 or sum(self.class_priors) <= 0:
            raise ConfigurationError("class_priors needs one non-negative weight per class", field="class_priors")
        self.background = tuple(float(v) for v in self.background)  # type: ignore[assignment]

    @property
    def mask_shape(self) -> tuple[int, int]:
        return self.height // 4, self.width // 4

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        for key in ("class_colors", "class_priors", "background", "fractions"):
            value = data[key]
            data[key] = [list(v) for v in value] if key == "class_colors" else list(value)
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> CorpusConfig:
        unknown = sorted(set(data) - set(cls.__dataclass_fields__))
        if unknown:
            raise ConfigurationError(f"unknown corpus setting {unknown[0]!r}", field=unknown[0])
        known = dict(data)
        for key in ("class_priors", "background", "fractions"):
            if known.get(key) is not None:
                known[key] = tuple(known[key])
        if known.get("class_colors") is not None:
            known["class_colors"] = tuple(tuple(c) for c in known["class_colors"])
        return cls(**known)
