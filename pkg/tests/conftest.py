import os
import sys
import warnings

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

from gaborwigner import Grid, Signal, l2_norm  # noqa: E402

settings.register_profile("default", max_examples=25, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def balanced(n: int) -> Grid:
    """Grid with equal position and frequency extent."""
    return Grid(n, 1 / np.sqrt(n))


def rand_signal(grid: Grid, rng, width: float = 1.0, degree: int = 2, spread: float = 0.2) -> Signal:
    x = grid.x
    c = rng.uniform(-spread, spread)
    poly = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    return Signal(grid, np.exp(-np.pi * ((x - c) / width) ** 2) * np.polyval(poly, x - c))


def unit_gauss(grid: Grid, width: float = 1.0) -> Signal:
    g = Signal(grid, np.exp(-np.pi * (grid.x / width) ** 2))
    return g / l2_norm(g)


def rel(a, b) -> float:
    a, b = np.asarray(a), np.asarray(b)
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def no_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        yield


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
