from importlib import resources

import pytest

from dechyp.surface import parse_surface

FIXTURES = ("tri444", "cusp_torus", "flare_torus")

_acceptance = {}


def data_path(name):
    return resources.files("dechyp") / "data" / name


def load_fixture(name):
    return parse_surface(data_path(f"{name}.json").read_text())


@pytest.fixture
def tri444():
    return load_fixture("tri444")


@pytest.fixture
def cusp_torus():
    return load_fixture("cusp_torus")


@pytest.fixture
def flare_torus():
    return load_fixture("flare_torus")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    n, title = marker.args
    _acceptance[n] = (title, report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_acceptance):
        title, ok = _acceptance[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {title}")
