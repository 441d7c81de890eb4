import numpy as np
import pytest

import twpasim as tw


@pytest.fixture(scope="session")
def device():
    """Shipped default amplifier, shared across the whole test session."""
    return tw.default_device()


@pytest.fixture(scope="session")
def lossless_device(device):
    return device.with_loss_tangent(0.0)


@pytest.fixture(scope="session")
def dense_grid():
    return np.linspace(4e9, 12e9, 4001)


@pytest.fixture(scope="session")
def lossless_response(lossless_device, dense_grid):
    return tw.cascade_sparams(lossless_device, dense_grid)


@pytest.fixture(scope="session")
def lossless_dispersion(lossless_device, dense_grid):
    return tw.dispersion(lossless_device, dense_grid)


@pytest.fixture(scope="session")
def small_device():
    """A fast 64-cell variant for tests that rebuild or re-integrate often."""
    return tw.default_device(cell_count=64)
