import numpy as np
import pytest

from ptwell.potential import make_potential


@pytest.fixture(scope="session")
def harmonic():
    return make_potential([(1.0, 2)], [(1.0, 1)], 1.0)


@pytest.fixture(scope="session")
def quartic():
    return make_potential([(1.0, 4)], [(1.0, 1)], 1.0)


@pytest.fixture(scope="session")
def mixed():
    return make_potential([(1.0, 2), (0.1, 4)], [(1.0, 1)], 1.0)


@pytest.fixture(scope="session")
def cubic_w():
    return make_potential([(1.0, 2), (1.0, 4)], [(1.0, 3)], 1.0)


def shifted_roots(E, eps):
    """Zeros of x^2 + i eps x - E by the quadratic formula."""
    r = np.sqrt(complex(E - eps**2 / 4))
    return -0.5j * eps - r, -0.5j * eps + r


_ACCEPTANCE = []


@pytest.fixture(scope="session")
def criterion():
    """Record one acceptance line: criterion(n, title, ok, detail)."""

    def record(n, title, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}"
        _ACCEPTANCE.append((n, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE, key=lambda t: t[0]):
        terminalreporter.write_line(line)
