import numpy as np
import pytest

from swsc.channels import DiscreteIC, GaussianIC, QuadratureIC, map_by_name


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def small_ic(rng):
    return DiscreteIC.random(rng, (3, 2, 3, 2))


@pytest.fixture(scope="session")
def gaussian_8db():
    return QuadratureIC(GaussianIC.from_db(8, 8), map_by_name("4pam_natural"), map_by_name("bpsk"))


def bsc(p):
    return np.array([[1 - p, p], [p, 1 - p]])


def h2(p):
    return 0.0 if p in (0.0, 1.0) else float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
