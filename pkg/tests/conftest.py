import functools
import time

import pytest

from tracepp.field import make_field

SESSION_START = time.perf_counter()
_criteria: dict[int, tuple[str, str]] = {}


@functools.lru_cache(maxsize=None)
def get_field(spec: str):
    return make_field(spec)


@pytest.fixture
def F():
    """Field factory shared across tests (contexts are immutable)."""
    return get_field


def pytest_collection_modifyitems(items):
    # acceptance criteria run last so the wall-clock criterion sees the whole suite
    items.sort(key=lambda item: item.get_closest_marker("criterion") is not None)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _criteria[n] = (title, "PASS" if rep.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        title, status = _criteria[n]
        terminalreporter.write_line(f"criterion {n:2d} {status}  {title}")
    terminalreporter.write_line(f"session wall-clock {time.perf_counter() - SESSION_START:.1f} s")
