from .config import StdlibLoggingConfig
from .logger import StdlibLogger

__all__ = ["StdlibLogger", "StdlibLoggingConfig"]
