import pytest

from splcover.data import path as data_path
from splcover.model import parse_model

# pass/fail lines recorded by the acceptance battery, echoed after the run
criterion_lines = []


def pytest_terminal_summary(terminalreporter):
    if criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in criterion_lines:
            terminalreporter.write_line(line)

BC_MODEL = """\
root A
optional A B
optional A C
excludes B C
"""

SINGLE_MODEL = "model M\nroot A\n"


@pytest.fixture(scope="session")
def gpl():
    return parse_model(data_path("gpl.fm").read_text())


@pytest.fixture()
def bc_model():
    return parse_model(BC_MODEL)


@pytest.fixture()
def single_model():
    return parse_model(SINGLE_MODEL)
