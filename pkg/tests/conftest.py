import math

import numpy as np
import pytest
from hypothesis import strategies as st

from qwalk2c import CoinParameters, InitialCoinState

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def coin_pi4():
    return CoinParameters(math.pi / 4)


@pytest.fixture
def bell():
    return InitialCoinState.bell()


@pytest.fixture
def nonloc():
    return InitialCoinState.nonlocalizing()


betas = st.floats(min_value=0.1, max_value=math.pi / 2 - 0.1)


@st.composite
def coin_states(draw):
    parts = draw(st.lists(st.floats(-1, 1), min_size=8, max_size=8))
    z = np.array(parts[:4]) + 1j * np.array(parts[4:])
    if np.linalg.norm(z) < 1e-3:
        z = np.array([1, 0, 0, 0], dtype=complex)
    return InitialCoinState.normalized(z)


def random_draws(n, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n):
        beta = rng.uniform(0.1, math.pi / 2 - 0.1)
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        out.append((CoinParameters(beta), InitialCoinState.normalized(z)))
    return out


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
