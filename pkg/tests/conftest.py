"""Collects acceptance-criterion outcomes and prints one line per criterion."""

import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.skipped:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        number, title = mark.args
        detail = "; ".join(v for k, v in item.user_properties if k == "detail")
        _RESULTS[number] = (title, rep.passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, ok, detail = _RESULTS[number]
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
