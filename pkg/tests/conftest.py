import pytest

from maxcurve.family import sample_curves


@pytest.fixture(scope="session")
def curves():
    return sample_curves()


@pytest.fixture(scope="session")
def E2(curves):
    return curves["E2"]


@pytest.fixture(scope="session")
def E3(curves):
    return curves["E3"]


@pytest.fixture(scope="session")
def E4(curves):
    return curves["E4"]


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion; the lines are
    printed immediately and repeated in the terminal summary."""

    def report(k: int, ok: bool, detail: str) -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
