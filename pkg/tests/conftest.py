import pytest

_LINES = {}


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion."""
    def record(number: int, ok: bool, detail: str):
        _LINES[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(_LINES[number])
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance")
        for number in sorted(_LINES):
            terminalreporter.write_line(_LINES[number])
