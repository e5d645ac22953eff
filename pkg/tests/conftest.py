import sys
from math import pi
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from dissension.states import ghz_state, random_density, to_density, w_state  # noqa: E402

DATA = Path(__file__).parent / "data"


@pytest.fixture
def ghz():
    return to_density(ghz_state(pi / 4))


@pytest.fixture
def w():
    return to_density(w_state())


@pytest.fixture
def mixed_states():
    return [random_density(3, 8, 1000 + s) for s in range(5)]


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return a + a.conj().T


_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
