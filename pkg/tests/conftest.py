import numpy as np
import pytest

from shnls.spectral import Grid


@pytest.fixture
def grid1d():
    return Grid(n=(64,), box_length=(20.0,))


@pytest.fixture
def grid2d():
    return Grid(n=(32, 16), box_length=(10.0, 7.5))


@pytest.fixture
def grid3d():
    return Grid(n=(16, 16, 16), box_length=(6.0, 7.0, 8.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_field(grid, rng):
    return rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)


@pytest.fixture
def all_grids(grid1d, grid2d, grid3d):
    return [grid1d, grid2d, grid3d]
