from .config import GetLogger, LoggingConfig
from .logger import Logger, NullLogger

__all__ = [
    "GetLogger",
    "Logger",
    "LoggingConfig",
    "NullLogger",
]
