"""Collect acceptance-criterion outcomes and print one line per criterion."""

import pytest

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(key, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    key, title = marker.args
    passed = report.passed and not report.skipped
    if report.when == "setup" and passed:
        return
    notes = [str(v) for k, v in item.user_properties if k == "measured"]
    _CRITERIA[key] = (title, "PASS" if passed else "FAIL", "; ".join(notes))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: (int(k.rstrip("ab")), k)):
        title, verdict, notes = _CRITERIA[key]
        line = f"criterion {key:<3} {verdict}  {title}"
        if notes:
            line += f"  [{notes}]"
        terminalreporter.write_line(line)
