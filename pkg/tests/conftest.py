"""Per-criterion PASS/FAIL summary for the acceptance suite."""

from collections import defaultdict

import pytest

_results: dict = defaultdict(list)
_titles: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k, title): acceptance criterion number and title")


def pytest_collection_modifyitems(items):
    for item in items:
        m = item.get_closest_marker("criterion")
        if m:
            _titles[m.args[0]] = m.args[1]


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        xfailed = hasattr(rep, "wasxfail")
        ok = rep.passed and not xfailed
        _results[m.args[0]].append((item.name, ok, xfailed))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for k in sorted(_titles):
        res = _results.get(k, [])
        if not res:
            continue
        ok = all(r[1] for r in res)
        line = f"CRITERION {k} ({_titles[k]}): {'PASS' if ok else 'FAIL'}"
        bad = [name for name, good, _ in res if not good]
        if bad:
            known = all(x for _, good, x in res if not good)
            line += f" [{'expected failure' if known else 'failed'}: {', '.join(bad)}]"
        tr.write_line(line)
