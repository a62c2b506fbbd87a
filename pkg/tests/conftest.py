from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from metrized import build_graph, polarize

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

# acceptance lines collected by test_acceptance and printed at the end
ACCEPTANCE_LINES: list[str] = []


def segment(L=1, m=(2, 2)):
    g = build_graph(["a", "b"], [("a", "b", Fraction(L))])
    return polarize(g, {"a": m[0], "b": m[1]})


def circle(L=1, m=2):
    g = build_graph(["p"], [("p", "p", Fraction(L))])
    return polarize(g, {"p": m} if m else {})


def theta(lengths=(1, 2, 3)):
    g = build_graph(["a", "b"], [("a", "b", Fraction(x)) for x in lengths])
    return polarize(g, {})


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
