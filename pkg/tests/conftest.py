import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from renyi_disks import SolverConfig, solve_all  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def solution():
    return solve_all(SolverConfig())


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
