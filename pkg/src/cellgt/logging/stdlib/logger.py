from __future__ import annotations

import logging
from typing import Any

__all__ = ("StdlibLogger",)


def _render(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class StdlibLogger:
    """A :class:`Logger` over :class:`logging.Logger`.

    Context from ``bind()`` / ``new()`` and per-call keywords is rendered as
    ``event: key=value, ...``. Floats (losses, learning rates) are printed
    with six significant digits.
    """

    _LOGGING_KWARGS = frozenset({"exc_info", "stack_info", "stacklevel"})

    def __init__(self, name: str = "cellgt", _context: dict[str, Any] | None = None) -> None:
        self._logger = logging.getLogger(name)
        self._context: dict[str, Any] = _context or {}

    def _emit(self, level: int, event: str, kwargs: dict[str, Any]) -> None:
        logging_kwargs = {k: v for k, v in kwargs.items() if k in self._LOGGING_KWARGS}
        merged = {**self._context, **{k: v for k, v in kwargs.items() if k not in self._LOGGING_KWARGS}}
        message = f"{event}: {', '.join(f'{k}={_render(v)}' for k, v in merged.items())}" if merged else event
        logging_kwargs.setdefault("stacklevel", 3)
        self._logger.log(level, message, **logging_kwargs)

    def debug(self, event: str, **kwargs: Any) -> Any:
        self._emit(logging.DEBUG, event, kwargs)

    def info(self, event: str, **kwargs: Any) -> Any:
        self._emit(logging.INFO, event, kwargs)

    def warning(self, event: str, **kwargs: Any) -> Any:
        self._emit(logging.WARNING, event, kwargs)

    def error(self, event: str, **kwargs: Any) -> Any:
        self._emit(logging.ERROR, event, kwargs)

    def exception(self, event: str, **kwargs: Any) -> Any:
        kwargs.setdefault("exc_info", True)
        self._emit(logging.ERROR, event, kwargs)

    def critical(self, event: str, **kwargs: Any) -> Any:
        self._emit(logging.CRITICAL, event, kwargs)

    def set_level(self, level: int) -> None:
        self._logger.setLevel(level)

    def bind(self, **kwargs: Any) -> StdlibLogger:
        return StdlibLogger(name=self._logger.name, _context={**self._context, **kwargs})

    def unbind(self, *keys: str) -> StdlibLogger:
        return StdlibLogger(name=self._logger.name, _context={k: v for k, v in self._context.items() if k not in keys})

    def new(self, **kwargs: Any) -> StdlibLogger:
        return StdlibLogger(name=self._logger.name, _context=dict(kwargs))
