from fractions import Fraction

import pytest

from maxcut_cvp.graph import WeightedGraph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def triangle():
    return WeightedGraph.unweighted(3, [(1, 2), (1, 3), (2, 3)])


@pytest.fixture
def single_edge():
    return WeightedGraph.unweighted(2, [(1, 2)])


@pytest.fixture
def weighted_triangle():
    return WeightedGraph(3, ((1, 2, Fraction(1)), (1, 3, Fraction(2)), (2, 3, Fraction(3))))
