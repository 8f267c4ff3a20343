from __future__ import annotations

from typing import Any, Protocol, runtime_checkable

__all__ = (
    "Logger",
    "NullLogger",
)


@runtime_checkable
class Logger(Protocol):
    """Structured logger taking a dotted event name and keyword context.

    Training, generation and the CLI all log through this protocol, e.g.
    ``logger.info("finetune.epoch.complete", epoch=3, loss=0.41)``. Context
    attached with :meth:`bind` is repeated on every later record.
    """

    def debug(self, event: str, /, **context: Any) -> Any: ...
    def info(self, event: str, /, **context: Any) -> Any: ...
    def warning(self, event: str, /, **context: Any) -> Any: ...
    def error(self, event: str, /, **context: Any) -> Any: ...
    def exception(self, event: str, /, **context: Any) -> Any: ...
    def critical(self, event: str, /, **context: Any) -> Any: ...
    def set_level(self, level: int) -> None: ...

    def bind(self, **context: Any) -> Logger: ...
    def unbind(self, *keys: str) -> Logger: ...
    def new(self, **context: Any) -> Logger: ...


class NullLogger:
    """Drops every record; the default wherever a ``logger`` argument is optional."""

    def _discard(self, event: str, /, **context: Any) -> None:
        return None

    debug = info = warning = error = exception = critical = _discard

    def set_level(self, level: int) -> None:
        return None

    def bind(self, **context: Any) -> NullLogger:
        return self

    def unbind(self, *keys: str) -> NullLogger:
        return self

    def new(self, **context: Any) -> NullLogger:
        return self
