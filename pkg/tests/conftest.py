from fractions import Fraction

import pytest

from bellcomm.core import ProbTable, Scenario
from bellcomm.polytope import dd_convert
from bellcomm.protocols import vertex_set

S221 = Scenario(2, 2, 1)


def swap_table(s=S221):
    """Each party outputs the other's setting."""
    return ProbTable.from_function(s, lambda a, b, i, j: int(a == j and b == i))


def signaling_mixture(s=S221):
    """1/2 (d(a,0) d(b,i) + d(a,j) d(b,0))."""
    return ProbTable.from_function(
        s, lambda a, b, i, j: Fraction(int(a == 0 and b == i) + int(a == j and b == 0), 2))


@pytest.fixture(scope="session")
def v221():
    return vertex_set(S221, "probability")


@pytest.fixture(scope="session")
def h221(v221):
    return dd_convert(v221)


@pytest.fixture(scope="session")
def v220():
    return vertex_set(Scenario(2, 2, 0), "probability")


@pytest.fixture(scope="session")
def h220(v220):
    return dd_convert(v220)


@pytest.fixture(scope="session")
def vcorr3():
    return vertex_set(Scenario(3, 2, 1), "correlation")


@pytest.fixture(scope="session")
def hcorr3(vcorr3):
    return dd_convert(vcorr3)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.call_failed = rep.failed
