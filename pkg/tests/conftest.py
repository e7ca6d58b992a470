import pytest

from surprise_sim.electorate import build_electorate


@pytest.fixture(scope="session")
def brexit_like():
    """10000 voters split as in the first experiment's sample."""
    return build_electorate(5200, 4800)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
