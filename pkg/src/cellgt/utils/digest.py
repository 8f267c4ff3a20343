from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import TYPE_CHECKING, Any

if TYPE_CHECKING:
    from collections.abc import Collection

__all__ = (
    "canonical_json",
    "config_digest",
    "tree_digest",
)


def canonical_json(document: Any) -> str:
    return json.dumps(document, sort_keys=True, separators=(",", ":"))


def config_digest(document: Any) -> str:
    """sha256 over the canonical (sorted, compact) JSON encoding."""
    return hashlib.sha256(canonical_json(document).encode("utf-8")).hexdigest()


def tree_digest(root: str | Path, exclude: Collection[str] = ("manifest.json", "run.log")) -> str:
    """sha256 over every file below ``root``: relative path, then content, in path order.

    Files whose name is in ``exclude`` are skipped; run bookkeeping lives
    next to the artefacts it describes.
    """
    base = Path(root)
    hasher = hashlib.sha256()
    for path in sorted(p for p in base.rglob("*") if p.is_file() and p.name not in exclude):
        hasher.update(path.relative_to(base).as_posix().encode("utf-8"))
        hasher.update(b"\0")
        hasher.update(path.read_bytes())
        hasher.update(b"\0")
    return hasher.hexdigest()
