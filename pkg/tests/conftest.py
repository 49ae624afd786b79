import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from opec import EnergyParams, paper_scenario  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def paper_ep():
    return EnergyParams(1.15, 1.1, 0.8)


@pytest.fixture(scope="session")
def paper_cfg():
    return paper_scenario()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
