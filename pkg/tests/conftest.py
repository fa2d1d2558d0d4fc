import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

_CRITERIA: dict = {}
_NOTES: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, text): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    num, text = mark.args
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        ok = rep.passed and _CRITERIA.get(num, (True,))[0]
        _CRITERIA[num] = (ok, text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        ok, text = _CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:>2} {'PASS' if ok else 'FAIL'}: {text}")
        for note in _NOTES.get(num, []):
            terminalreporter.write_line(f"    {note}")


@pytest.fixture
def note(request):
    """Attach a line of detail to the summary of the test's criterion."""
    mark = request.node.get_closest_marker("criterion")

    def add(text):
        print(text)
        if mark is not None:
            _NOTES.setdefault(mark.args[0], []).append(text)

    return add
