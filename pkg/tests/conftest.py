import pytest

ACCEPTANCE_RECORDS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RECORDS:
        return
    terminalreporter.section("acceptance criteria")
    for rec in sorted(ACCEPTANCE_RECORDS, key=lambda r: r.id):
        terminalreporter.write_line(rec.line())
