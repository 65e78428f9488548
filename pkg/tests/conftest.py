import pytest

from kcut import families
from kcut.multigraph import WeightedMultigraph


@pytest.fixture
def triangle():
    return WeightedMultigraph.from_edge_list(3, [(0, 1, 2), (1, 2, 3), (0, 2, 5)])


@pytest.fixture
def c6():
    return families.cycle(6)


@pytest.fixture
def k4():
    return families.clique(4)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report_criterion():
    """Record one pass/fail line for an acceptance criterion."""

    def record(number, name: str, ok: bool | None, detail: str) -> bool | None:
        status = "REPORT" if ok is None else ("PASS" if ok else "FAIL")
        line = f"criterion {number} {name}: {status} {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
