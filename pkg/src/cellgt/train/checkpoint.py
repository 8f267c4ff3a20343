"""Checkpoint container.

Byte layout::

    CELLGT-CHECKPOINT <version>\\n
    <compact key-sorted JSON header>\\n
    <float64 little-endian payloads, concatenated in header order>

The header holds ``format_version``, ``config_digest`` (sha256 of the
canonical config JSON), ``config``, ``step``, ``rng_state`` and
``tensors``: a name-sorted list of ``{name, shape, offset, count}`` where
``offset`` is the byte offset into the payload and ``count`` the number of
float64 values.
"""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Any

import numpy as np

from cellgt.exceptions import CheckpointError, CheckpointMismatchError
from cellgt.utils import canonical_json, config_digest

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from cellgt.gradcore import ParameterSet

__all__ = (
    "CHECKPOINT_MAGIC",
    "CHECKPOINT_VERSION",
    "Checkpoint",
    "load_into",
)

CHECKPOINT_MAGIC = "CELLGT-CHECKPOINT"
CHECKPOINT_VERSION = 1
_FLOAT = np.dtype("<f8")


@dataclass(frozen=True, eq=False)
class Checkpoint:
    config: dict[str, Any]
    tensors: dict[str, NDArray[np.float64]]
    step: int = 0
    rng_state: dict[str, Any] = field(default_factory=dict)
    format_version: int = CHECKPOINT_VERSION

    @property
    def config_digest(self) -> str:
        return config_digest(self.config)

    def shapes(self) -> dict[str, tuple[int, ...]]:
        return {name: tuple(values.shape) for name, values in self.tensors.items()}

    def subset(self, prefix: str) -> dict[str, NDArray[np.float64]]:
        return {name: values for name, values in self.tensors.items() if name.startswith(prefix)}

    def to_bytes(self) -> bytes:
        entries = []
        payload = bytearray()
        for name in sorted(self.tensors):
            values = np.ascontiguousarray(self.tensors[name], dtype=_FLOAT)
            entries.append(
                {"name": name, "shape": list(values.shape), "offset": len(payload), "count": int(values.size)}
            )
            payload += values.tobytes()
        header = {
            "format_version": self.format_version,
            "config_digest": self.config_digest,
            "config": self.config,
            "step": self.step,
            "rng_state": self.rng_state,
            "tensors": entries,
        }
        preamble = f"{CHECKPOINT_MAGIC} {self.format_version}\n{canonical_json(header)}\n"
        return preamble.encode("utf-8") + bytes(payload)

    @classmethod
    def from_bytes(cls, data: bytes, source: str = "<bytes>") -> Checkpoint:
        first = data.find(b"\n")
        second = data.find(b"\n", first + 1)
        if first < 0 or second < 0:
            raise CheckpointError(f"{source}: truncated checkpoint header")
        magic, _, version = data[:first].decode("utf-8", errors="replace").partition(" ")
        if magic != CHECKPOINT_MAGIC:
            raise CheckpointError(f"{source}: not a cellgt checkpoint")
        if version != str(CHECKPOINT_VERSION):
            raise CheckpointError(f"{source}: unsupported checkpoint version {version!r}")
        try:
            header = json.loads(data[first + 1 : second])
        except json.JSONDecodeError as exc:
            raise CheckpointError(f"{source}: unreadable header ({exc.msg})") from exc
        if header.get("config_digest") != config_digest(header.get("config")):
            raise CheckpointError(f"{source}: config digest does not match the stored config")

        payload = memoryview(data)[second + 1 :]
        tensors: dict[str, NDArray[np.float64]] = {}
        expected = 0
        for entry in header.get("tensors", []):
            start, count = int(entry["offset"]), int(entry["count"])
            if start != expected or start + count * _FLOAT.itemsize > len(payload):
                raise CheckpointError(f"{source}: tensor {entry['name']!r} lies outside the payload")
            values = np.frombuffer(payload[start : start + count * _FLOAT.itemsize], dtype=_FLOAT)
            tensors[entry["name"]] = values.astype(np.float64).reshape(entry["shape"])
            expected = start + count * _FLOAT.itemsize
        if expected != len(payload):
            raise CheckpointError(f"{source}: {len(payload) - expected} trailing payload bytes")

        return cls(
            config=header["config"],
            tensors=tensors,
            step=int(header.get("step", 0)),
            rng_state=header.get("rng_state", {}),
            format_version=int(header["format_version"]),
        )

    def save(self, path: str | Path) -> Path:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(self.to_bytes())
        return target

    @classmethod
    def load(cls, path: str | Path) -> Checkpoint:
        source = Path(path)
        if not source.is_file():
            raise FileNotFoundError(f"checkpoint not found: {source}")
        return cls.from_bytes(source.read_bytes(), source=str(source))


def load_into(
    params: ParameterSet, tensors: Mapping[str, NDArray[np.float64]], *, require_all: bool = True
) -> list[str]:
    """Copy ``tensors`` into ``params`` after checking every name and shape.

    All problems are collected first so the error lists every offending tensor.
    """
    model_shapes = params.shapes()
    mismatches: dict[str, tuple[tuple[int, ...] | None, tuple[int, ...] | None]] = {}
    for name, values in tensors.items():
        want = model_shapes.get(name)
        if want != tuple(values.shape):
            mismatches[name] = (tuple(values.shape), want)
    if require_all:
        for name in model_shapes.keys() - tensors.keys():
            mismatches[name] = (None, model_shapes[name])
    if mismatches:
        raise CheckpointMismatchError(mismatches)
    return params.load(tensors)
