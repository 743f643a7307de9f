import numpy as np
import pytest

from gammasum.model import GammaSumModel

ACCEPTANCE_LINES = []


def random_model(rng, n_range=(1, 5), shape_range=(0.3, 3.0), total=None):
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    shape = float(np.exp(rng.uniform(np.log(shape_range[0]), np.log(shape_range[1]))))
    a = rng.dirichlet(np.ones(n))
    if total is not None:
        a = a * total
    return GammaSumModel.of(shape, a)


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def report_line():
    def record(line):
        ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
