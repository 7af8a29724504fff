"""Qubit dynamics: ideal evolution and the noisy stochastic Schrodinger equation."""

from .evolution import (
    apply_amplitude_calibration,
    evolve_ideal,
    propagator_elements,
    segment_propagator,
    validate_schedule,
)
from .platen import platen_step
from .sse import BatchResult, integrate_sse, integrate_sse_batch
from .states import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    NoiseOperatorSpec,
    QubitState,
    drive_axis,
    fidelity,
    hamiltonian,
)

__all__ = [
    "IDENTITY",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "BatchResult",
    "NoiseOperatorSpec",
    "QubitState",
    "apply_amplitude_calibration",
    "drive_axis",
    "evolve_ideal",
    "fidelity",
    "hamiltonian",
    "integrate_sse",
    "integrate_sse_batch",
    "platen_step",
    "propagator_elements",
    "segment_propagator",
    "validate_schedule",
]
