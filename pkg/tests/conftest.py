import numpy as np
import pytest

from qvote.prefs import CandidateSet, Mode, enumerate_basis

# filled by test_acceptance.py, printed once at the end of the session
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: [int(p) if p.isdigit() else p for p in k.replace(".", " ").split()]):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def strict3():
    return enumerate_basis(CandidateSet.first(3), Mode.STRICT)


@pytest.fixture(scope="session")
def weak3():
    return enumerate_basis(CandidateSet.first(3), Mode.WEAK)


@pytest.fixture(scope="session")
def strict4():
    return enumerate_basis(CandidateSet.first(4), Mode.STRICT)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
