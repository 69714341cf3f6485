import json
import os
import time

import pytest
from hypothesis import HealthCheck, settings

import strategies

settings.register_profile(
    "floerkit",
    max_examples=200,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("floerkit")

SESSION = {"start": None, "outcomes": {}, "criteria": {}}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, text): acceptance criterion number and summary")
    config.addinivalue_line("markers", "property_suite: randomized suite counted by acceptance criterion 11")


def pytest_sessionstart(session):
    SESSION["start"] = time.perf_counter()


def pytest_collection_modifyitems(config, items):
    # acceptance runs last so it can see the outcomes of the property suites
    items.sort(key=lambda it: it.nodeid.startswith("tests/test_acceptance.py"))


def pytest_runtest_logreport(report):
    if report.when == "call" or report.outcome != "passed":
        prev = SESSION["outcomes"].get(report.nodeid)
        if prev != "failed":
            SESSION["outcomes"][report.nodeid] = report.outcome


def pytest_runtest_makereport(item, call):
    m = item.get_closest_marker("criterion")
    if m is not None and call.when == "call":
        SESSION["criteria"][m.args[0]] = (m.args[1], call.excinfo is None, call.duration)


def pytest_sessionfinish(session, exitstatus):
    path = os.environ.get("FLOERKIT_COUNTS_OUT")
    if path:
        with open(path, "w") as fh:
            json.dump({"counts": strategies.COUNTS, "outcomes": SESSION["outcomes"]}, fh)


def pytest_terminal_summary(terminalreporter):
    crit = SESSION["criteria"]
    if not crit:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(crit):
        text, ok, dur = crit[n]
        terminalreporter.write_line("criterion %2d: %s  (%.2fs)  %s" % (n, "PASS" if ok else "FAIL", dur, text))
    elapsed = time.perf_counter() - SESSION["start"]
    terminalreporter.write_line("session wall time: %.1fs" % elapsed)


@pytest.fixture
def session_state():
    return SESSION
