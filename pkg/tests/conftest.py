import pytest

from mlefit.sampling import RngStream

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng():
    return RngStream(12345, 0, 0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
