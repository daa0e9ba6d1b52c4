import pytest

from nullfd import FD, Relation

FACULTY_ATTRS = ["professor", "chair", "department"]
FACULTY_ROWS = [
    ["Joe", None, "Mathematics"],
    ["Joe", "Jill", "Computer Science"],
    ["Bill", "Arthur", "Mathematics"],
]
TAXES_ATTRS = ["SSN", "income", "taxation"]
TAXES_ROWS = [
    ["1112233", None, "15%"],
    ["1112233", None, "25%"],
]


@pytest.fixture
def faculty():
    return Relation.from_rows(FACULTY_ATTRS, FACULTY_ROWS)


@pytest.fixture
def taxes():
    return Relation.from_rows(TAXES_ATTRS, TAXES_ROWS)


@pytest.fixture
def chain_fds():
    return [FD.of("E,D", "A"), FD.of("A", "F"), FD.of("A,B", "F")]


_acceptance_lines = []


def record_acceptance(line: str) -> None:
    _acceptance_lines.append(line)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
