import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hillgreen import GridSpec, Potential, fundamental_pair  # noqa: E402


@pytest.fixture(scope="session")
def grid101():
    return GridSpec(101)


@pytest.fixture(scope="session")
def pair_m1():
    return fundamental_pair(Potential.constant(-1.0), 0.0, GridSpec(1001))


@pytest.fixture(scope="session")
def pair_zero():
    return fundamental_pair(Potential.constant(0.0), 0.0, GridSpec(1001))


@pytest.fixture(scope="session")
def sampled_potential():
    t = np.linspace(0.0, 1.0, 101)
    return Potential.sampled(t, -2.0 - np.sin(2 * np.pi * t))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if not mod or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[key])
