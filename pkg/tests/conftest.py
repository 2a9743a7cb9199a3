import numpy as np
import pytest

from tomoroute import max_angle_matrix, path_encoded_settings, six_state_settings

_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record a named pass/fail line, printed in the terminal summary."""

    def record(name, ok, detail=""):
        _CRITERIA.append((name, bool(ok), detail))
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _CRITERIA:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")


@pytest.fixture(scope="session")
def six1():
    return six_state_settings(1)


@pytest.fixture(scope="session")
def six1_matrix(six1):
    return max_angle_matrix(six1)


@pytest.fixture(scope="session")
def path1():
    return path_encoded_settings(1)


# maximal wave plate travel between H, V, D, A, R, L
SIX_STATE_TRAVEL = np.array(
    [
        [0, 45, 22.5, 22.5, 45, 45],
        [45, 0, 22.5, 67.5, 45, 45],
        [22.5, 22.5, 0, 45, 45, 45],
        [22.5, 67.5, 45, 0, 45, 45],
        [45, 45, 45, 45, 0, 90],
        [45, 45, 45, 45, 90, 0],
    ]
)

ONE_QUBIT_TOUR = ["H", "L", "A", "R", "V", "D"]

TWO_QUBIT_TOUR = (
    "HH HA AH AD AV AA RR RL RD RH RA RV "
    "AL AR HL HR DR DL VL VR LR LL LA LV "
    "LD LH VV VD VH VA DD DV DA DH HV HD"
).split()


def random_matrix(rng, n, symmetric, integer=True):
    m = rng.integers(1, 100, size=(n, n)).astype(float) if integer else rng.uniform(0.1, 10.0, size=(n, n))
    if symmetric:
        m = np.triu(m, 1)
        m = m + m.T
    np.fill_diagonal(m, 0.0)
    return m
