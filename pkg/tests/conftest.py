import pytest

from lcrit.characters import enumerate_primitive_characters, get_character
from lcrit.zeros import find_zeros


@pytest.fixture(scope="session")
def chi3():
    return get_character(3, 1)


@pytest.fixture(scope="session")
def chi4():
    return get_character(4, 1)


@pytest.fixture(scope="session")
def chi5s():
    return enumerate_primitive_characters(5)


@pytest.fixture(scope="session")
def zeros4_60(chi4):
    return find_zeros(chi4, 60.0)


@pytest.fixture(scope="session")
def zeros3_60(chi3):
    return find_zeros(chi3, 60.0)


@pytest.fixture(scope="session")
def zeros4_150(chi4):
    return find_zeros(chi4, 150.0)


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_line():
    """Record one pass/fail line for the acceptance summary."""
    def record(number, name, passed, detail):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append((number, f"[{status}] criterion {number}: {name} | {detail}"))
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(ACCEPTANCE_LINES, key=lambda x: str(x[0])):
        terminalreporter.write_line(line)
