import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

_ACCEPTANCE: dict[int, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    number = getattr(report, "acceptance_number", None)
    if number is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _ACCEPTANCE.setdefault(number, []).append((report.nodeid, report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    marker = item.get_closest_marker("acceptance")
    if marker is not None:
        outcome.get_result().acceptance_number = int(marker.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        results = _ACCEPTANCE[number]
        ok = all(outcome == "passed" for _, outcome in results)
        failed = [nodeid.split("::")[-1] for nodeid, outcome in results if outcome != "passed"]
        tail = "" if ok else "  failing: " + ", ".join(failed)
        terminalreporter.write_line(
            f"criterion {number:>2}: {'PASS' if ok else 'FAIL'} ({len(results)} test(s)){tail}"
        )
