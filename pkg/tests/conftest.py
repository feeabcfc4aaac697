import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from robustmc.kripke import load_model  # noqa: E402

EXAMPLE = HERE / "data" / "example.model"


@pytest.fixture
def example():
    return load_model(EXAMPLE)


@pytest.fixture
def example_path():
    return str(EXAMPLE)


def pytest_terminal_summary(terminalreporter):
    from acceptance_report import lines
    report = lines()
    if report:
        terminalreporter.section("acceptance criteria")
        for line in report:
            terminalreporter.write_line(line)
