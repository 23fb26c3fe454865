import numpy as np
import pytest

from sfrcs.signal_model import RadarParams, default_grid


@pytest.fixture
def stationary_params():
    """Stationary benchmark waveform: R_u = 15 km, 70 pulses."""
    return RadarParams(f0=1e6, delta_f=1e4, n_pulses=70)


@pytest.fixture
def stationary_grid(stationary_params):
    return default_grid(stationary_params, 100)


@pytest.fixture
def moving_params():
    return RadarParams(f0=1e8, delta_f=1e5, n_pulses=100)


@pytest.fixture
def moving_grid(moving_params):
    return default_grid(moving_params, 40, 6)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
