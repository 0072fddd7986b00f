import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: dict[int, tuple[bool, str]] = {}


def record_criterion(n: int, ok: bool, message: str) -> None:
    _CRITERIA[n] = (ok, message)
    print(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {message}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, message = _CRITERIA[n]
        terminalreporter.write_line(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} {message}")
