import numpy as np
import pytest

from ma_secrecy.channel import ChannelTable
from ma_secrecy.grid import GridSpec
from ma_secrecy.secrecy import SystemParams


def cn(rng, n):
    return (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2)


def random_table(rng, grid, eve=True):
    h_E = cn(rng, grid.M) if eve else np.zeros(grid.M, dtype=complex)
    return ChannelTable(cn(rng, grid.M), h_E, grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture
def params():
    return SystemParams(P_t=4.0, sigma2=1.0)


@pytest.fixture
def small_grid():
    return GridSpec.discrete(12, 3, 2)


def pytest_configure(config):
    config.acceptance_lines = []


def pytest_terminal_summary(terminalreporter, config):
    if config.acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in config.acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def report(request):
    """Record one acceptance line: ``report(label, ok, detail)``."""

    def _report(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f": {detail}" if detail else "")
        request.config.acceptance_lines.append(line)
        print(line)
        return ok

    return _report
