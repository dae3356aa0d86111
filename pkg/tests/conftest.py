import numpy as np
import pytest

from harmsurf.specs import builtin_surface


@pytest.fixture(scope="session")
def square():
    return builtin_surface("square")


@pytest.fixture(scope="session")
def identity():
    return builtin_surface("identity")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def disk_points(rng, n, r_max=0.9):
    """Uniform-ish seeded points with |z| <= r_max."""
    r = r_max * np.sqrt(rng.uniform(0, 1, n))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, n))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(RESULTS):
            terminalreporter.write_line(line)
