import pytest

from marathon_deficit import DeficitProblem, parse_bounds_csv, parse_splits_csv
from marathon_deficit import fixtures as bundled

CASE_STUDY_TARGET_DS = 700

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_verdict():
    """Record one PASS/FAIL line per acceptance criterion, then assert it."""
    def record(number: int, ok: bool, detail: str) -> None:
        line = f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def fixture_splits():
    return parse_splits_csv(bundled.splits_bytes())


@pytest.fixture(scope="session")
def fixture_capacities():
    return tuple(parse_bounds_csv(bundled.bounds_bytes()))


@pytest.fixture(scope="session")
def fixture_problem(fixture_capacities):
    return DeficitProblem(target=CASE_STUDY_TARGET_DS,
                          capacities=fixture_capacities)


@pytest.fixture(scope="session")
def splits_csv_path():
    return str(bundled.splits_path())


@pytest.fixture(scope="session")
def bounds_csv_path():
    return str(bundled.bounds_path())
