import logging

from cellgt.logging import NullLogger
from cellgt.logging.stdlib.logger import StdlibLogger

__all__ = (
    "TestNullLogger",
    "TestStdlibLogger",
)


class TestStdlibLogger:
    def test_renders_event_and_context(self, caplog):
        logger = StdlibLogger("render-check").bind(stage="finetune", seed=2)
        with caplog.at_level(logging.INFO, logger="render-check"):
            logger.info("epoch.complete", loss=0.123456789, epoch=3)
        assert caplog.messages == ["epoch.complete: stage=finetune, seed=2, loss=0.123457, epoch=3"]

    def test_bare_event(self, caplog):
        with caplog.at_level(logging.WARNING, logger="render-check"):
            StdlibLogger("render-check").warning("split.empty")
        assert caplog.messages == ["split.empty"]

    def test_unbind_and_new(self, caplog):
        logger = StdlibLogger("render-check").bind(a=1, b=2)
        with caplog.at_level(logging.DEBUG, logger="render-check"):
            logger.unbind("a").debug("one")
            logger.new(c=3).debug("two")
        assert caplog.messages == ["one: b=2", "two: c=3"]


class TestNullLogger:
    def test_accepts_everything(self):
        logger = NullLogger().bind(stage="x")
        assert logger.info("anything", value=1) is None
        assert isinstance(logger.new(), NullLogger)
