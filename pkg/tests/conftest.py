import pytest

_ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    """``acceptance(k, passed, detail)`` records the outcome of criterion ``k``."""

    def record(k: int, passed: bool, detail: str) -> None:
        _ACCEPTANCE[k] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[k]
        terminalreporter.write_line(f"ACCEPTANCE {k}: {'PASS' if passed else 'FAIL'} - {detail}")
