import pytest

_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: ``criterion(number, title, status, detail)``."""

    def record(number, title, status, detail=""):
        if isinstance(status, bool):
            status = "PASS" if status else "FAIL"
        _ACCEPTANCE[number] = (title, status, detail)
        print(f"criterion {number:2d} {status}: {title} | {detail}")
        return status

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, status, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"[{status}] {number:2d}. {title} | {detail}")
