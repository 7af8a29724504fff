"""Schema test fixtures."""

import pytest


@pytest.fixture
def valid_noise_params_data() -> dict:
    """Valid NoiseParams data for an OU realization."""
    return {
        "kind": "ou",
        "gamma": 6.0,
        "kappa": 5e3,
        "fine_dt": 4e-9,
        "duration": 200e-6,
        "seed": 17,
    }


@pytest.fixture
def valid_array_data() -> dict:
    """Valid ArrayModel data with three sites."""
    return {
        "n_sites": 3,
        "n_meas": 75,
        "p_c": 0.5,
        "p01": 0.04,
        "p10": 0.04,
        "site_scales": (0.98, 1.0, 1.02),
    }


@pytest.fixture
def calibration_csv(tmp_path):
    """Calibration CSV with a header row, in Hz."""
    path = tmp_path / "calibration.csv"
    path.write_text("setpoint,rabi_hz\n0,0\n1,50000\n2,80000\n", encoding="utf-8")
    return path
