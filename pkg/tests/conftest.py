import numpy as np
import pytest

from hydrogenoid.radial import make_frame


@pytest.fixture
def attractive_frame():
    """nu = -1, kappa = 1/2: lambda = 2, eta = 1."""
    return make_frame(-1.0, 0.5)


@pytest.fixture
def repulsive_frame():
    return make_frame(1.0, -0.7)


@pytest.fixture
def mp():
    mpmath = pytest.importorskip("mpmath")
    mpmath.mp.dps = 50
    return mpmath


@pytest.fixture
def rng():
    return np.random.default_rng(20201)
