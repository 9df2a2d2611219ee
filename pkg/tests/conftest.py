"""Shared fixtures: acceptance-line collection and deterministic hypothesis settings."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", max_examples=60, deadline=None, derandomize=True, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("repo")

_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record the outcome of one acceptance criterion; failures also fail the test."""

    def record(number: int, title: str, checks: list[tuple[str, bool]]) -> None:
        failed = [label for label, ok in checks if not ok]
        passed = not failed
        detail = f"{title} ({len(checks) - len(failed)}/{len(checks)} checks)"
        _CRITERIA[number] = (passed, detail)
        line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
        print(line)
        assert passed, line + "\n  failing: " + "\n  failing: ".join(failed)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        passed, detail = _CRITERIA[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}")
