# pyright: reportWildcardImportFromLibrary=false
import pytest

from cellgt.testing._internal.conftest import *

__all__ = (
    "pytest_addoption",
    "pytest_collection_modifyitems",
    "pytest_configure",
)


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="run slow tests (multi-epoch training, experiment acceptance runs)",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: trains for many steps; skipped unless --runslow or -m slow")


def _slow_requested(config) -> bool:
    return bool(config.getoption("--runslow")) or "slow" in (config.getoption("markexpr") or "")


def pytest_collection_modifyitems(config, items):
    if _slow_requested(config):
        return
    skip_slow = pytest.mark.skip(reason="slow: pass --runslow or select with -m slow")
    for item in items:
        if item.get_closest_marker("slow") is not None:
            item.add_marker(skip_slow)
