import math

import pytest

from tancascade.cascade import cascade_table

ACCEPTANCE_LINES: list = []


@pytest.fixture(scope="session")
def table5():
    return cascade_table(5)


@pytest.fixture(scope="session")
def table8():
    return cascade_table(8)


@pytest.fixture(scope="session")
def t_star(table8):
    return table8.t_infinity_estimate


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
