import sys
from fractions import Fraction

import pytest

from conelab.model import build_problem
from conelab.polyexpr import parse_poly

Y2 = ["y1", "y2"]
Y3 = ["y1", "y2", "y3"]


def make(exprs, names, ybar, ystar):
    return build_problem([parse_poly(e, names) for e in exprs], ybar, ystar)


def fixture_a():
    return make(["-y1^2 + y2", "-y1^2 - y2"], Y2, [0, 0], [0, 1])


def fixture_b():
    return make(["-y1^2 + y2", "-y1^2 - y2", "y1"], Y2, [0, 0], [0, 1])


def fixture_c():
    return make(["y1", "y2"], Y2, [0, 0], [1, 0])


def fixture_d():
    return make(["y3 - y1^3", "y3 - 8*y2^3"], Y3, [0, 0, 0], [0, 0, 1])


def F(*xs):
    return tuple(Fraction(x) for x in xs)


@pytest.fixture(scope="session")
def pa():
    return fixture_a()


@pytest.fixture(scope="session")
def pb():
    return fixture_b()


@pytest.fixture(scope="session")
def pc():
    return fixture_c()


@pytest.fixture(scope="session")
def pd():
    return fixture_d()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = sorted(getattr(mod, "LINES", []))
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
