from __future__ import annotations

from collections.abc import Iterator, Mapping
from typing import TYPE_CHECKING

import numpy as np

from cellgt.exceptions import ContractError
from cellgt.gradcore.tensor import Tensor

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

__all__ = (
    "ParameterSet",
    "add_conv",
    "add_linear",
    "normal_init",
    "uniform_fan_in",
)


def uniform_fan_in(rng: np.random.Generator, shape: tuple[int, ...], fan_in: int) -> NDArray[np.float64]:
    """U(-1/sqrt(fan_in), 1/sqrt(fan_in)); zeros when fan_in is 0."""
    if fan_in <= 0:
        return np.zeros(shape)
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape)


def normal_init(rng: np.random.Generator, shape: tuple[int, ...], std: float) -> NDArray[np.float64]:
    return rng.normal(0.0, std, size=shape)


class ParameterSet(Mapping[str, Tensor]):
    """Named, trainable tensors in insertion order.

    Names are dotted (``extractor.enc1.weight``); ``subset`` selects by
    prefix, which is how the pretrained extractor is transferred.
    """

    def __init__(self, tensors: Mapping[str, Tensor] | None = None) -> None:
        self._tensors: dict[str, Tensor] = {}
        for name, tensor in (tensors or {}).items():
            self._tensors[name] = tensor

    def add(self, name: str, values: ArrayLike) -> Tensor:
        if name in self._tensors:
            raise ContractError(f"parameter {name!r} already defined")
        tensor = Tensor(values, requires_grad=True, name=name)
        self._tensors[name] = tensor
        return tensor

    def __getitem__(self, name: str) -> Tensor:
        return self._tensors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._tensors)

    def __len__(self) -> int:
        return len(self._tensors)

    def subset(self, prefix: str) -> ParameterSet:
        return ParameterSet({k: v for k, v in self._tensors.items() if k.startswith(prefix)})

    def shapes(self) -> dict[str, tuple[int, ...]]:
        return {k: v.shape for k, v in self._tensors.items()}

    def zero_grad(self) -> None:
        for tensor in self._tensors.values():
            tensor.zero_grad()

    def snapshot(self) -> dict[str, NDArray[np.float64]]:
        return {k: v.values.copy() for k, v in self._tensors.items()}

    def load(self, arrays: Mapping[str, NDArray[np.float64]], *, strict: bool = True) -> list[str]:
        """Copy values in by name; returns the names that were loaded."""
        loaded: list[str] = []
        for name, values in arrays.items():
            if name not in self._tensors:
                if strict:
                    raise ContractError(f"unknown parameter {name!r}")
                continue
            target = self._tensors[name]
            if target.shape != tuple(values.shape):
                raise ContractError(f"{name}: shape {tuple(values.shape)} does not fit {target.shape}")
            target.values = np.array(values, dtype=np.float64)
            loaded.append(name)
        return loaded

    def num_scalars(self) -> int:
        return int(sum(t.size for t in self._tensors.values()))


def add_linear(
    params: ParameterSet, name: str, fan_in: int, fan_out: int, rng: np.random.Generator, *, bias: bool = True
) -> tuple[Tensor, Tensor | None]:
    """Register ``name.weight`` (fan_in, fan_out) with uniform fan-in init and a zero ``name.bias``."""
    weight = params.add(f"{name}.weight", uniform_fan_in(rng, (fan_in, fan_out), fan_in))
    return weight, (params.add(f"{name}.bias", np.zeros(fan_out)) if bias else None)


def add_conv(
    params: ParameterSet, name: str, c_in: int, c_out: int, kernel: int, rng: np.random.Generator
) -> tuple[Tensor, Tensor]:
    fan_in = c_in * kernel * kernel
    weight = params.add(f"{name}.weight", uniform_fan_in(rng, (c_out, c_in, kernel, kernel), fan_in))
    return weight, params.add(f"{name}.bias", np.zeros(c_out))
