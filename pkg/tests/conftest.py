"""Shared fixtures and the per-criterion acceptance summary."""

import sys
from collections import defaultdict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_RESULTS = defaultdict(list)
_DETAILS = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion covered by the test")


@pytest.fixture
def detail(request):
    """Attach a short measurement to the criterion line of the current test."""
    marker = request.node.get_closest_marker("criterion")

    def add(text):
        if marker is not None:
            _DETAILS[marker.args[0]].append(text)

    return add


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _RESULTS[marker.args[0]].append((item.name, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(_RESULTS):
        outcomes = _RESULTS[n]
        ok = all(o == "passed" for _, o in outcomes)
        failed = [name for name, o in outcomes if o != "passed"]
        parts = list(_DETAILS.get(n, []))
        if failed:
            parts.append("failing: " + ", ".join(failed))
        text = "; ".join(parts)
        tr.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}" + (f"  {text}" if text else ""))
