import numpy as np
import pytest

from tomokit import PhaseSpaceGrid


@pytest.fixture(scope="session")
def grid256():
    return PhaseSpaceGrid.square(8.0, 256)


@pytest.fixture(scope="session")
def grid128():
    return PhaseSpaceGrid.square(6.0, 128)


def vacuum_line(X, mu, nu, sigma=0.0):
    """Normal profile of the vacuum along X = mu q + nu p, window variance added."""
    v = mu * mu + nu * nu + 2.0 * sigma ** 2
    return np.exp(-np.asarray(X) ** 2 / v) / np.sqrt(np.pi * v)


def bin_average_exp(X, dx, rate=2.0):
    """Bin averages of ``rate * exp(-rate X)`` on ``X >= 0`` over bins centred on X."""
    a = np.clip(X - dx / 2, 0, None)
    b = np.clip(X + dx / 2, 0, None)
    return (np.exp(-rate * a) - np.exp(-rate * b)) / dx
