import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

import _accept  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20260819)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _accept.lines:
        terminalreporter.section("acceptance criteria")
        for line in _accept.lines:
            terminalreporter.write_line(line)
