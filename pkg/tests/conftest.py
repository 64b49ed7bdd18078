import pytest

from ymlie.detsys import extract_determining
from ymlie.liealgebra import by_name
from ymlie.yangmills import build_gauge, build_system

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def su2():
    return by_name("su2")


@pytest.fixture(scope="session")
def su2su2():
    return by_name("su2+su2")


@pytest.fixture(scope="session")
def sys_su2(su2):
    return build_system(su2)


@pytest.fixture(scope="session")
def sys_su2su2(su2su2):
    return build_system(su2su2)


@pytest.fixture(scope="session")
def gauge_su2(su2):
    return build_gauge(su2)


@pytest.fixture(scope="session")
def ds_su2(sys_su2):
    return extract_determining(sys_su2)


@pytest.fixture(scope="session")
def ds_su2_gauge(sys_su2, gauge_su2):
    return extract_determining(sys_su2, gauge_su2)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
