"""Prints one pass/fail line per acceptance criterion at the end of a run."""

import re

_CRITERIA = {}
_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    match = _PATTERN.search(report.nodeid)
    if not match:
        return
    key = (int(match.group(1)), match.group(2).replace("_", " "))
    if report.when == "call" or report.outcome != "passed":
        previous = _CRITERIA.get(key, "PASS")
        _CRITERIA[key] = "PASS" if (report.passed and previous == "PASS") else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), outcome in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"criterion {number:2d} {outcome}: {title}")
