"""Per-criterion pass/fail lines for the acceptance suite."""

import re

_results: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"test_(c\d\d)_(\w+)", report.nodeid)
    if not m:
        return
    key = m.group(1)
    if report.when == "call" or report.outcome != "passed":
        prev = _results.get(key, ("PASS", ""))[0]
        outcome = "PASS" if report.outcome == "passed" and prev == "PASS" else "FAIL"
        _results[key] = (outcome, m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_results):
        outcome, title = _results[key]
        terminalreporter.write_line(f"{key.upper()} {outcome:4s} {title}")
