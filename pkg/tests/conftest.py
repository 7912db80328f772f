import numpy as np
import pytest

from vilenkin.group import parse_radices

ACCEPTANCE_LINES: list[str] = []


def record(line: str) -> None:
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["2,3,2,3", "2^5", "3,2,3,2", "2,3,4,5", "5,3"])
def small(request):
    return parse_radices(request.param)


def random_values(rng, size):
    return rng.standard_normal(size) + 1j * rng.standard_normal(size)
