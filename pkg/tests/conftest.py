import time

import numpy as np
import pytest

from homogplate.analysis import run_sweep
from homogplate.field import ScalarField, make_grid

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def sweep_1024():
    """The central experiment: eps in {1/2, 1/3}, C0 = 1/2, f = 1, T = 10 on n = 1024."""
    grid = make_grid(1024)
    start = time.perf_counter()
    result = run_sweep(
        ["1/2", "1/3"],
        0.5,
        1024,
        ScalarField.constant(grid, 1.0),
        10.0,
        baseline_mu0=True,
        keep_fields=True,
    )
    return result, time.perf_counter() - start


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
