from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path
from typing import Any

from cellgt.exceptions import ConfigurationError

__all__ = (
    "MANIFEST_NAME",
    "RunManifest",
    "prepare_output",
    "read_manifest",
    "tool_version",
)


MANIFEST_NAME = "manifest.json"


def tool_version() -> str:
    try:
        return version("cellgt")
    except PackageNotFoundError:
        return "0+unknown"


@dataclass(kw_only=True)
class RunManifest:
    """What a command was asked to do, written before it does it.

    Together with the corpus (identified by ``corpus_digest``) the resolved
    ``config`` reproduces the run's outputs exactly.
    """

    command: str
    config: dict[str, Any]
    corpus_digest: str | None
    seeds: list[int]
    out: str
    version: str = field(default_factory=tool_version)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def write(self, directory: str | Path) -> Path:
        path = Path(directory) / MANIFEST_NAME
        path.write_text(json.dumps(self.to_dict(), indent=1, sort_keys=True) + "\n", encoding="utf-8")
        return path


def read_manifest(directory: str | Path) -> RunManifest:
    path = Path(directory) / MANIFEST_NAME
    if not path.is_file():
        raise FileNotFoundError(f"no run manifest in {directory}")
    return RunManifest(**json.loads(path.read_text(encoding="utf-8")))


def prepare_output(directory: str | Path, *, force: bool) -> Path:
    """Create the output directory; an existing manifest there is only replaced with ``force``."""
    out = Path(directory)
    if (out / MANIFEST_NAME).exists() and not force:
        raise ConfigurationError(f"{out} already holds a run manifest; pass --force to overwrite", field="out")
    out.mkdir(parents=True, exist_ok=True)
    return out
