import numpy as np
import pytest

from vortexlink.grid import Grid3


@pytest.fixture(scope="session")
def grid32():
    return Grid3(32, 2 * np.pi)


@pytest.fixture(scope="session")
def grid48():
    return Grid3(48, 2 * np.pi)


@pytest.fixture()
def rng():
    return np.random.default_rng(20260809)
