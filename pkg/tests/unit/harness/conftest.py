"""Harness test fixtures."""

import pytest

from noise_fidelity.config import (
    ArrayConfig,
    ExperimentConfig,
    NoiseConfig,
    OutputConfig,
    PSDConfig,
    PulseConfig,
    RBSettings,
    SpamConfig,
    SweepConfig,
)
from noise_fidelity.harness import EnsembleSpec
from noise_fidelity.schemas import NoiseKind, PulseSchedule


@pytest.fixture
def harness_config(tmp_path) -> ExperimentConfig:
    """Small OU configuration: one 50 kHz Rabi cycle, 4 realizations, 3 sites."""
    return ExperimentConfig(
        seed=5,
        noise=NoiseConfig(kind=NoiseKind.OU, gamma=6.0, kappa=5e3, fine_dt=1e-7),
        pulse=PulseConfig(duration=20e-6, segment_dt=1e-6),
        array=ArrayConfig(n_sites=3, n_meas=20),
        sweep=SweepConfig(
            realizations=4,
            gammas=(0.0, 6.0),
            times=(0.0, 10e-6, 20e-6),
            kinds=(NoiseKind.OU,),
            distribution_times=(0.0, 20e-6),
            bins=10,
            kde_points=50,
            convergence_dts=(1e-7, 1e-6),
            convergence_realizations=4,
        ),
        psd=PSDConfig(duration=20e-6, n_traces=2, nperseg=64, f_min=2e5, f_max=5e6),
        rb=RBSettings(lengths=(1, 2, 3), n_sequences=2, n_meas=10),
        spam=SpamConfig(
            bins=10,
            coarse_step=0.05,
            fine_step=0.01,
            p01_bounds=(0.0, 0.2),
            p10_bounds=(0.0, 0.2),
        ),
        output=OutputConfig(output_dir=tmp_path / "runs"),
    )


@pytest.fixture
def ensemble_spec(calib, rabi, small_array) -> EnsembleSpec:
    """OU ensemble point over a full 20 us noise window."""
    return EnsembleSpec(
        kind=NoiseKind.OU,
        gamma=6.0,
        kappa=5e3,
        fine_dt=1e-7,
        pulse=PulseSchedule.constant(
            setpoint=rabi,
            duration=20e-6,
            segment_dt=1e-6,
            noise_duration=20e-6,
        ),
        calib=calib,
        model=small_array,
        seed=5,
    )
