import pytest

from transserial import derivation, prelog
from transserial.elclosure import Tower


@pytest.fixture(scope="session")
def ddx():
    return derivation.logexp_ddx()


@pytest.fixture(scope="session")
def geometric():
    return derivation.sigma_geometric()


@pytest.fixture(scope="session")
def sigma():
    return prelog.sigma_induced()


@pytest.fixture
def tower(sigma):
    return Tower(sigma)


@pytest.fixture(params=["logexp-ddx", "sigma-geometric", "interleaved(2)"])
def preset_spec(request):
    return derivation.preset(request.param)


# acceptance criteria report: one line per criterion in the terminal summary

_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion", None)
    if marks is None:
        return
    number, title = marks
    ok = report.passed or report.outcome == "skipped"
    if report.when == "call" or not ok:
        previous = _criteria.get(number, (title, True))[1]
        _criteria[number] = (title, previous and ok)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = tuple(mark.args)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}")
