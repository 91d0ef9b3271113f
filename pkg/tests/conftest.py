import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""

    def record(label, passed, detail):
        _CRITERIA[label] = f"{'PASS' if passed else 'FAIL'}  {label}: {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_CRITERIA, key=lambda s: (int("".join(c for c in s.split()[1] if c.isdigit())), s)):
        terminalreporter.write_line(_CRITERIA[label])
