import warnings
from functools import lru_cache

import pytest

from splinescaling.report import construct


@lru_cache(maxsize=None)
def _construction(n, branch="paper"):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return construct(n, branch)


@pytest.fixture
def build():
    """Cached construct(n, branch); the pipeline is pure so sharing is safe."""
    return _construction


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance") or __import__("sys").modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
