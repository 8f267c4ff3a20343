import sys
from dataclasses import dataclass, field
from logging.config import dictConfig
from typing import Any

from cellgt.logging.config import GetLogger, LoggingConfig
from cellgt.logging.stdlib.logger import StdlibLogger

__all__ = ("StdlibLoggingConfig",)


@dataclass(kw_only=True)
class StdlibLoggingConfig(LoggingConfig):
    """``dictConfig``-backed logging: console output through a queue listener.

    ``log_file`` adds a plain file handler next to the console, used by the
    CLI for ``--log-file``.
    """

    formatters: dict[str, dict[str, Any]] = field(default_factory=dict)
    handlers: dict[str, dict[str, Any]] = field(default_factory=dict)
    loggers: dict[str, dict[str, Any]] = field(default_factory=dict)
    log_file: str | None = None
    configure_root_logger: bool = False

    def __post_init__(self) -> None:
        if "standard" not in self.formatters:
            self.formatters["standard"] = {"format": "%(levelname)s - %(asctime)s - %(name)s - %(message)s"}

        if "console" not in self.handlers:
            self.handlers["console"] = {"class": "logging.StreamHandler", "level": "DEBUG", "formatter": "standard"}

        if self.log_file is not None and sys.version_info >= (3, 12) and "file" not in self.handlers:
            self.handlers["file"] = {
                "class": "logging.FileHandler",
                "level": "DEBUG",
                "formatter": "standard",
                "filename": self.log_file,
                "encoding": "utf-8",
            }

        if "queue_listener" not in self.handlers:
            self.handlers["queue_listener"] = self._default_queue_listener_handler()

        if self.logger_name not in self.loggers:
            self.loggers[self.logger_name] = {"level": self.level, "handlers": ["queue_listener"], "propagate": False}

    def configure(self) -> GetLogger:
        logger_config: dict[str, Any] = {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": self.formatters,
            "handlers": self.handlers,
            "loggers": self.loggers,
        }
        if self.configure_root_logger:
            logger_config["root"] = {"handlers": ["queue_listener"], "level": self.level}

        dictConfig(logger_config)
        name = self.logger_name
        return lambda **context: StdlibLogger(name, _context=dict(context))

    def _default_queue_listener_handler(self) -> dict[str, Any]:
        downstream = ["console", "file"] if self.log_file is not None else ["console"]
        if sys.version_info >= (3, 12):
            return {
                "class": "logging.handlers.QueueHandler",
                "level": "DEBUG",
                "queue": {"()": "queue.Queue", "maxsize": -1},
                "listener": "cellgt.logging.stdlib.queue.LoggingQueueListener",
                "handlers": downstream,
            }
        return {
            "class": "cellgt.logging.stdlib.queue.QueueListenerHandler",
            "level": "DEBUG",
            "formatter": "standard",
            "filename": self.log_file,
        }
