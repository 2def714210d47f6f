import pytest

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def record():
    """Store the outcome of one acceptance criterion for the terminal summary."""

    def _record(criterion: int, passed: bool, detail: str = "") -> None:
        prev = ACCEPTANCE.get(criterion, (True, ""))
        ACCEPTANCE[criterion] = (prev[0] and passed, "; ".join(s for s in (prev[1], detail) if s))

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
