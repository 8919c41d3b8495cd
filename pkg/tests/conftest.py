import numpy as np
import pytest

from skewasym.monotone import registered

PLUS = np.array([1.0, 1.0]) / np.sqrt(2)
MINUS = np.array([1.0, -1.0]) / np.sqrt(2)
NUMBER = np.diag([0.0, 1.0])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=registered(), ids=lambda f: f.label)
def monotone(request):
    return request.param


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
