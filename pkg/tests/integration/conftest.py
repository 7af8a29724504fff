"""Acceptance test fixtures - large Monte-Carlo ensembles, run with ``-m slow``."""

import pytest

from noise_fidelity.harness import EnsembleSpec
from noise_fidelity.schemas import NoiseKind, PulseSchedule


@pytest.fixture
def make_spec(calib, rabi, single_site):
    """Build a single-site, unmeasured ensemble point on a 1 us grid."""

    def _make(
        kind: NoiseKind,
        gamma: float,
        t: float = 200e-6,
        kappa: float = 0.0,
        segment_dt: float = 1e-6,
        fine_dt: float = 1e-6,
        seed: int = 2024,
    ) -> EnsembleSpec:
        return EnsembleSpec(
            kind=kind,
            gamma=gamma,
            kappa=kappa,
            fine_dt=fine_dt,
            pulse=PulseSchedule.constant(
                setpoint=rabi, duration=200e-6, segment_dt=segment_dt, noise_duration=t
            ),
            calib=calib,
            model=single_site,
            seed=seed,
            measure=False,
        )

    return _make
