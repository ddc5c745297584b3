import pytest

# criterion number -> list of (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(number: int, passed: bool, detail: str = ""):
    ACCEPTANCE.setdefault(number, []).append((bool(passed), detail))


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        entries = ACCEPTANCE[number]
        failed = [d for ok, d in entries if not ok]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {number:2d}: {status} ({len(entries) - len(failed)}/{len(entries)} checks)"
        if failed:
            line += " failing: " + "; ".join(failed)
        terminalreporter.write_line(line)
