import functools
import re

import pytest

from descent_quiver.workspace import Workspace

_CRITERION = re.compile(r"test_criterion_(\d+)")


@functools.lru_cache(maxsize=None)
def workspace(type_label: str, rank: int) -> Workspace:
    return Workspace(type_label, rank)


@pytest.fixture(scope="session")
def ws():
    return workspace


def pytest_configure(config):
    config._criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    m = _CRITERION.match(item.name)
    if not m or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    number = int(m.group(1))
    doc = (item.function.__doc__ or "").strip().splitlines()[0] if item.function.__doc__ else item.name
    entry = item.config._criteria.setdefault(number, {"doc": doc, "parts": []})
    entry["parts"].append((item.name, "skipped" if report.skipped else report.outcome))


def pytest_terminal_summary(terminalreporter, config):
    criteria = getattr(config, "_criteria", {})
    if not criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(criteria):
        entry = criteria[number]
        outcomes = [o for _, o in entry["parts"]]
        if any(o == "failed" for o in outcomes):
            status = "FAIL"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "PARTIAL (some parts skipped)"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {entry['doc']}")
