"""Noise test fixtures."""

import pytest

from noise_fidelity.noise import NoiseTrace, generate_trace
from noise_fidelity.schemas import NoiseParams


@pytest.fixture
def wn_params() -> NoiseParams:
    """White noise, gamma = 6, 1000 steps of 1 us."""
    return NoiseParams(kind="wn", gamma=6.0, fine_dt=1e-6, duration=1e-3, seed=11)


@pytest.fixture
def ou_trace() -> NoiseTrace:
    """Short OU realization with known parameters."""
    params = NoiseParams(kind="ou", gamma=6.0, kappa=5e3, fine_dt=1e-6, duration=40e-6, seed=3)
    return generate_trace(params)
