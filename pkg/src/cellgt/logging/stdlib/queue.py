import atexit
from logging import FileHandler, Handler, LogRecord, StreamHandler
from logging.handlers import QueueHandler, QueueListener
from queue import Queue
from typing import Any

__all__ = (
    "LoggingQueueListener",
    "QueueListenerHandler",
)


class LoggingQueueListener(QueueListener):
    """Queue listener that is running as soon as it exists and is stopped at exit.

    Corpus generation logs from worker threads; all console and file writes
    happen on the listener's thread, one record at a time.
    """

    def __init__(self, queue: Queue[LogRecord], *handlers: Handler, respect_handler_level: bool = False) -> None:
        super().__init__(queue, *handlers, respect_handler_level=respect_handler_level)
        self.start()
        atexit.register(self.stop)


def _sinks(handlers: Any, filename: str | None) -> list[Handler]:
    # dictConfig hands over a ConvertingList; indexing resolves the handler references.
    sinks: list[Handler] = [handlers[i] for i in range(len(handlers))] if handlers else [StreamHandler()]
    if filename is not None:
        sinks.append(FileHandler(filename, encoding="utf-8"))
    return sinks


class QueueListenerHandler(QueueHandler):
    """Queue handler owning its listener, for dictConfig without the ``listener`` key (Python 3.11).

    Records are formatted once here, so the console and ``filename`` sinks
    write identical lines.
    """

    def __init__(self, handlers: Any = None, filename: str | None = None) -> None:
        queue: Queue[LogRecord] = Queue(-1)
        super().__init__(queue)
        self.listener = LoggingQueueListener(queue, *_sinks(handlers, filename))
