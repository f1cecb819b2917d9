import numpy as np
import pytest

from nomasim import UserChannel


@pytest.fixture
def fig3_channels():
    """|h| = [10, 1], unit noise: the reference two-user setting."""
    return [UserChannel.scalar(10.0), UserChannel.scalar(1.0)]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
