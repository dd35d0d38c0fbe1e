import pytest

from caminalab import acceptance


@pytest.fixture(scope="session")
def order729():
    """Classification report for p = 3, r = 4, n = 2 (computed once)."""
    return acceptance.classification(3, 4, 2)


@pytest.fixture(scope="session")
def extraspecial27():
    return acceptance.classification(3, 2, 1)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for res in RESULTS:
            terminalreporter.write_line(res.line())
