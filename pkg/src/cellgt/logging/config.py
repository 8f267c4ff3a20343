from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, TypeAlias

from cellgt.logging.logger import Logger

__all__ = ("GetLogger", "LoggingConfig")


GetLogger: TypeAlias = Callable[..., Logger]


@dataclass(kw_only=True)
class LoggingConfig:
    """Base configuration for cellgt's logging system."""

    logger_name: str = "cellgt"
    level: str = "INFO"
    extra: dict[str, Any] = field(default_factory=dict)

    def configure(self) -> GetLogger:
        raise NotImplementedError("Need to implement `configure` for this configuration")
