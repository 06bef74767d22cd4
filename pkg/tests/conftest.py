import pytest
from hypothesis import HealthCheck, settings

from qfusion.cartan import fixture

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def sl2():
    return fixture("sl2")


@pytest.fixture(scope="session")
def sl3():
    return fixture("sl3")


@pytest.fixture(scope="session")
def B2():
    return fixture("B2")


@pytest.fixture(scope="session")
def G2():
    return fixture("G2")


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
