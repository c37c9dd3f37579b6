import os

from hypothesis import HealthCheck, settings

settings.register_profile("exforge", max_examples=60, deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "exforge"))

import pytest

CRITERIA = {
    1: "magic square dimensions",
    2: "Lie axioms",
    3: "grading catalog types",
    4: "universal groups",
    5: "structurable identities",
    6: "construction cross-checks",
    7: "e6 characterizations",
    8: "root systems",
    9: "Z_5^3 suite",
    10: "Z_4^3 suite",
    11: "property suites",
    12: "non-fine Z_4 grading",
}

_outcomes = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is None:
        return
    n = m.args[0]
    if rep.when == "call" or rep.outcome != "passed":
        if hasattr(rep, "wasxfail"):
            status = "xfail"
        else:
            status = rep.outcome
        _outcomes.setdefault(n, []).append((item.name, status))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(CRITERIA):
        res = _outcomes.get(n)
        if not res:
            continue
        bad = [name for name, s in res if s != "passed"]
        word = "PASS" if not bad else "FAIL"
        line = f"criterion {n:2d} {word}  {CRITERIA[n]} ({len(res) - len(bad)}/{len(res)} checks)"
        if bad:
            line += "  failing: " + ", ".join(bad)
        tr.write_line(line)
