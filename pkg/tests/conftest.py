"""Shared test fixtures for all tests."""

import math

import pytest

from noise_fidelity.schemas import AmplitudeCalibration, ArrayModel, PulseSchedule

RABI = 2 * math.pi * 50e3


@pytest.fixture
def calib() -> AmplitudeCalibration:
    """Linear calibration: setpoint equals Rabi frequency in rad/s."""
    return AmplitudeCalibration.identity()


@pytest.fixture
def rabi() -> float:
    """Nominal Rabi frequency, 2 pi x 50 kHz."""
    return RABI


@pytest.fixture
def twenty_pi_pulse() -> PulseSchedule:
    """200 us pulse at 50 kHz (a 20 pi rotation) with noise throughout."""
    return PulseSchedule.constant(
        setpoint=RABI, duration=200e-6, segment_dt=1e-6, noise_duration=200e-6
    )


@pytest.fixture
def single_site() -> ArrayModel:
    """One site at the nominal Rabi frequency without SPAM errors."""
    return ArrayModel.homogeneous(1, 50, p_c=1.0, p01=0.0, p10=0.0)


@pytest.fixture
def small_array() -> ArrayModel:
    """Three sites with loading and SPAM errors."""
    return ArrayModel(
        n_sites=3,
        n_meas=40,
        p_c=0.5,
        p01=0.04,
        p10=0.04,
        site_scales=(0.999, 1.0, 1.001),
    )
