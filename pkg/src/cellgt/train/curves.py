from __future__ import annotations

import json
from pathlib import Path
from typing import Any

__all__ = ("CurveLog",)


class CurveLog:
    """Per-epoch training records, kept in memory and appended to a JSON Lines file when ``path`` is set."""

    def __init__(self, path: str | Path | None = None) -> None:
        self.path = Path(path) if path is not None else None
        self.records: list[dict[str, Any]] = []

    def append(self, record: dict[str, Any]) -> None:
        self.records.append(record)
        if self.path is not None:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with self.path.open("a", encoding="utf-8") as handle:
                handle.write(json.dumps(record, sort_keys=True) + "\n")

    def values(self, key: str) -> list[Any]:
        return [r[key] for r in self.records if key in r]

    @staticmethod
    def read(path: str | Path) -> list[dict[str, Any]]:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return [json.loads(line) for line in lines if line.strip()]
