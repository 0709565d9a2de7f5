import sys

import pytest

from geocurrents.currents import LiftCrossingBudget
from geocurrents.fuchsian import builtin_group


@pytest.fixture(scope="session")
def torus():
    return builtin_group("punctured_torus")


@pytest.fixture(scope="session")
def sphere3():
    return builtin_group("thrice_punctured_sphere")


@pytest.fixture(scope="session")
def budget():
    return LiftCrossingBudget(8, 2)


@pytest.fixture(scope="session")
def deep_budget():
    return LiftCrossingBudget(10, 2)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
