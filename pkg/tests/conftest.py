import pytest

ACCEPTANCE = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict line; lines are printed in the terminal summary."""

    def record(name, ok, detail=""):
        ACCEPTANCE.append((name, ok, detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
