"""Shared fixtures: the acceptance-criterion recorder and its summary hook."""

import pytest

_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def record_criterion():
    """Record one acceptance criterion outcome; printed in the final summary."""

    def _record(name: str, passed: bool, detail: str = "") -> None:
        _RESULTS.append((name, passed, detail))
        assert passed, f"{name}: {detail}"

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name, passed, detail in _RESULTS:
        tag = "PASS" if passed else "FAIL"
        line = f"{tag}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
