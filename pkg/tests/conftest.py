import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from percolab.generators import gen_complete, gen_fixture, gen_paley  # noqa: E402


@pytest.fixture(scope="session")
def k4():
    return gen_complete(4)


@pytest.fixture(scope="session")
def k5():
    return gen_complete(5)


@pytest.fixture(scope="session")
def c5():
    return gen_fixture("cycle", 5)


@pytest.fixture(scope="session")
def petersen():
    return gen_fixture("petersen")


@pytest.fixture(scope="session")
def paley13():
    return gen_paley(13)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_line():
    """Record one PASS/FAIL line; all of them are echoed in the terminal summary."""

    def emit(number, passed, text):
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {text}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
