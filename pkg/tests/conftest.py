from __future__ import annotations

import pytest

from feedledger import DEFAULT_POLICIES, EventStore, FeedbackPlatform
from feedledger.simulate import make_clock

_acceptance_results: list[tuple[str, str]] = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _acceptance_results.append((name, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, outcome in _acceptance_results:
        terminalreporter.write_line(f"{name}: {outcome}")


def build_platform(path=None, supply=1_000_000, tags=("opening-hours", "collections", "events")):
    store = EventStore(path, clock=make_clock(), sync=False)
    platform = FeedbackPlatform(store)
    platform.initialize(
        money_supply=supply,
        policies=dict(DEFAULT_POLICIES),
        area_tags=list(tags),
        admin_address="admin",
        admin_key="admin-key",
    )
    return platform


@pytest.fixture
def platform():
    return build_platform()


@pytest.fixture
def file_platform(tmp_path):
    return build_platform(tmp_path / "ledger.log")
