import os
from pathlib import Path

import pytest

from stratest.core import RPS, MixedStrategy, PlaySequence

_acceptance: dict[str, list[tuple[str, str]]] = {}


@pytest.fixture
def uniform3():
    return MixedStrategy.uniform(RPS)


@pytest.fixture
def short_example():
    return PlaySequence.from_labels("RRPPPSPRR", RPS)


@pytest.fixture
def cycle50():
    return PlaySequence.from_labels(("RPS" * 17)[:50], RPS)


def rps_dataset_dir() -> Path | None:
    """Location of a manually fetched copy of the public RPS dataset, if any."""
    candidates = [os.environ.get("RPS_DATA_DIR"), Path(__file__).parent.parent / "data" / "RPSdata"]
    for c in candidates:
        if c and Path(c).is_dir():
            return Path(c)
    return None


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = report.keywords.get("acceptance")
    if not marker:
        return
    number = report.user_properties and dict(report.user_properties).get("criterion")
    if number is None:
        return
    outcome = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}[report.outcome]
    _acceptance.setdefault(str(number), []).append((outcome, report.nodeid.split("::")[-1]))


@pytest.hookimpl(tryfirst=True)
def pytest_runtest_setup(item):
    marker = item.get_closest_marker("acceptance")
    if marker:
        item.user_properties.append(("criterion", marker.args[0]))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_acceptance, key=int):
        for outcome, name in _acceptance[number]:
            terminalreporter.write_line(f"criterion {number}: {outcome}  {name}")
