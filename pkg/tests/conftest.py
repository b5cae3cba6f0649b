import pytest

from hybridgnfs.gnfs.polynomial import select_polynomial
from hybridgnfs.numtheory import build_factor_base

SEMIPRIMES = {
    45113: (197, 229),
    10403: (101, 103),
    1022117: (1009, 1013),
    1200710099: (30011, 40009),
    3001009003: (3001, 1000003),
    8812454039: (89003, 99013),
}


@pytest.fixture(scope="session")
def small_poly():
    return select_polynomial(45113, 3)


@pytest.fixture(scope="session")
def small_base(small_poly):
    return build_factor_base(small_poly, 100)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
