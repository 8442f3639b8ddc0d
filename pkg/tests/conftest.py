import pytest

from midconv import make_field


@pytest.fixture(scope="session")
def F7():
    return make_field(7, 1)


@pytest.fixture(scope="session")
def F5():
    return make_field(5, 1)


@pytest.fixture(scope="session")
def F9():
    return make_field(3, 2)


# the acceptance module stores its one-line verdicts here
AC_LINES = []


def pytest_terminal_summary(terminalreporter):
    if AC_LINES:
        terminalreporter.section("acceptance criteria")
        for line in AC_LINES:
            terminalreporter.write_line(line)
