import pytest

_LINES = []


def emit_line(criterion, ok, detail):
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    _LINES.append(line)
    print(line)
    return ok


@pytest.fixture
def acceptance():
    return emit_line


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
