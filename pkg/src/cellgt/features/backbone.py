from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from cellgt.exceptions import ConfigurationError
from cellgt.gradcore import (
    ParameterSet,
    Tensor,
    add,
    add_conv,
    as_tensor,
    conv2d,
    max_pool2d,
    relu,
    reshape,
    upsample_nearest2d,
)

if TYPE_CHECKING:
    import numpy as np
    from numpy.typing import ArrayLike

    from cellgt.features.config import BackboneConfig

__all__ = (
    "EXTRACTOR_PREFIX",
    "FeatureExtractor",
    "FeatureMap",
    "extract",
)

EXTRACTOR_PREFIX = "extractor."


@dataclass(frozen=True)
class FeatureMap:
    """Stride-4 feature map ``f`` of shape (C, ceil(H/4), ceil(W/4))."""

    values: Tensor

    @property
    def channels(self) -> int:
        return self.values.shape[0]

    @property
    def height(self) -> int:
        return self.values.shape[1]

    @property
    def width(self) -> int:
        return self.values.shape[2]


class FeatureExtractor:
    """Four encoder stages (conv strides 2, 2, 1, 1) and three decoder stages.

    ``enc4`` works on a 2x max-pooled copy of ``enc3`` and ``dec1`` brings it
    back up; ``dec1`` adds the ``enc3`` skip, ``dec2`` adds a 1x1 lateral of
    ``enc2`` and produces ``f``; ``seg`` is the final 1x1 layer.
    """

    def __init__(self, config: BackboneConfig, params: ParameterSet, prefix: str = EXTRACTOR_PREFIX) -> None:
        self.config = config
        self.params = params
        self.prefix = prefix

    @classmethod
    def create(
        cls,
        config: BackboneConfig,
        params: ParameterSet,
        rng: np.random.Generator,
        prefix: str = EXTRACTOR_PREFIX,
    ) -> FeatureExtractor:
        s1, s2, s3, s4 = config.stage_channels
        add_conv(params, f"{prefix}enc1", config.in_channels, s1, 3, rng)
        add_conv(params, f"{prefix}enc2", s1, s2, 3, rng)
        add_conv(params, f"{prefix}enc3", s2, s3, 3, rng)
        add_conv(params, f"{prefix}enc4", s3, s4, 3, rng)
        add_conv(params, f"{prefix}dec1", s4, s3, 3, rng)
        add_conv(params, f"{prefix}dec2", s3, config.channels, 3, rng)
        add_conv(params, f"{prefix}lateral", s2, config.channels, 1, rng)
        add_conv(params, f"{prefix}seg", config.channels, config.num_classes + 1, 1, rng)
        return cls(config, params, prefix)

    def _conv(self, name: str, x: Tensor, stride: int = 1) -> Tensor:
        weight = self.params[f"{self.prefix}{name}.weight"]
        bias = self.params[f"{self.prefix}{name}.bias"]
        out = conv2d(x, weight, stride=stride, pad=weight.shape[-1] // 2)
        return add(out, reshape(bias, (bias.shape[0], 1, 1)))

    def __call__(self, image: Tensor | ArrayLike) -> tuple[FeatureMap, Tensor]:
        x = as_tensor(image)
        if x.ndim != 3 or x.shape[0] != self.config.in_channels:
            raise ConfigurationError(
                f"expected a ({self.config.in_channels}, H, W) image, got shape {x.shape}", field="in_channels"
            )
        if x.shape[1] % 4 or x.shape[2] % 4:
            raise ConfigurationError(f"image sides must be divisible by 4, got {x.shape[1:]}", field="image")

        e1 = relu(self._conv("enc1", x, stride=2))
        e2 = relu(self._conv("enc2", e1, stride=2))
        e3 = relu(self._conv("enc3", e2))
        e4 = relu(self._conv("enc4", max_pool2d(e3)))
        d1 = add(relu(self._conv("dec1", upsample_nearest2d(e4, size=e3.shape[1:]))), e3)
        f = relu(add(self._conv("dec2", d1), self._conv("lateral", e2)))
        seg_logits = self._conv("seg", f)
        return FeatureMap(f), seg_logits


def extract(image: Tensor | ArrayLike, config: BackboneConfig, params: ParameterSet) -> tuple[FeatureMap, Tensor]:
    """``(f, seg_logits)`` for a (3, H, W) image."""
    return FeatureExtractor(config, params)(image)
