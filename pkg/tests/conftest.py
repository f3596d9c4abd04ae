import pytest
from hypothesis import settings

from upslopes.padic import PadicContext

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def ctx9():
    """Context over Z_3[zeta_9], e = 6."""
    return PadicContext(3, m=3, prec=20)


@pytest.fixture
def ctx3():
    """Context over Z_3[zeta_3], e = 2."""
    return PadicContext(3, m=2, prec=20)


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
