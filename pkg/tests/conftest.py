import pytest

A, B = -0.15, 1.35

_acceptance_lines = []


@pytest.fixture
def record():
    """Collect one summary line per acceptance criterion."""

    def _record(criterion, ok, detail):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {criterion}: {detail}"
        _acceptance_lines.append((criterion, line))
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_acceptance_lines, key=lambda item: item[0]):
            terminalreporter.write_line(line)
