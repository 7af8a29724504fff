"""Noiseless evolution under piecewise-constant drive."""

import numpy as np
import numpy.typing as npt

from ..errors import ConstraintViolationError, InvalidArgumentError
from ..schemas import AmplitudeCalibration, PulseSchedule
from .states import ComplexArray, QubitState

FloatArray = npt.NDArray[np.float64]
Elements = tuple[ComplexArray, ComplexArray, ComplexArray, ComplexArray]


def apply_amplitude_calibration(calib: AmplitudeCalibration, setpoint: float) -> float:
    """Rabi frequency (rad/s) produced by an amplitude setpoint."""
    return calib.rabi_frequency(setpoint)


def validate_schedule(pulse: PulseSchedule, calib: AmplitudeCalibration) -> None:
    """Reject runs of identical segments shorter than the calibration's minimum segment."""
    for start, length, _ in pulse.runs():
        duration = length * pulse.segment_dt
        if duration < calib.min_segment * (1.0 - 1e-9):
            raise ConstraintViolationError(
                f"segment run at index {start} lasts {duration:.3e} s, "
                f"below the minimum {calib.min_segment:.3e} s"
            )


def propagator_elements(
    omega: float | FloatArray,
    delta: float,
    phase: float,
    duration: float,
) -> Elements:
    """Entries (u00, u01, u10, u11) of exp(-i H t) for constant drive.

    With W = sqrt(Omega^2 + Delta^2) and theta = W t / 2 the propagator is
    exp(-i Delta t / 2) [cos(theta) I - i sin(theta) (Omega n.sigma - Delta sigma_z) / W].
    ``omega`` may be an array to evaluate many sites at once.
    """
    omega_arr = np.asarray(omega, dtype=np.float64)
    w = np.sqrt(omega_arr * omega_arr + delta * delta)
    theta = 0.5 * w * duration
    cos_t = np.cos(theta)
    # sin(theta) / W, finite at W = 0
    sin_over_w = 0.5 * duration * np.sinc(theta / np.pi)
    global_phase = np.exp(-0.5j * delta * duration)
    off = -1j * sin_over_w * omega_arr
    u00 = global_phase * (cos_t + 1j * sin_over_w * delta)
    u11 = global_phase * (cos_t - 1j * sin_over_w * delta)
    u01 = global_phase * off * np.exp(-1j * phase)
    u10 = global_phase * off * np.exp(1j * phase)
    return u00, u01, u10, u11


def segment_propagator(omega: float, delta: float, phase: float, duration: float) -> ComplexArray:
    """Closed-form 2x2 propagator of one constant segment."""
    u00, u01, u10, u11 = propagator_elements(omega, delta, phase, duration)
    return np.array([[u00, u01], [u10, u11]], dtype=np.complex128)


def apply_elements(elements: Elements, y: ComplexArray) -> ComplexArray:
    """Apply per-row 2x2 propagators to a batch of states of shape (n, 2)."""
    u00, u01, u10, u11 = elements
    y0 = y[:, 0]
    y1 = y[:, 1]
    return np.stack((u00 * y0 + u01 * y1, u10 * y0 + u11 * y1), axis=1)


def evolve_ideal(
    pulse: PulseSchedule,
    calib: AmplitudeCalibration,
    state0: QubitState,
    site_scale: float = 1.0,
) -> QubitState:
    """Evolve a state through the pulse without noise.

    Args:
        pulse: Drive schedule.
        calib: Amplitude calibration curve.
        state0: Initial state.
        site_scale: Multiplier on the Rabi frequency.

    Returns:
        Final state (exact per-segment propagators, no renormalization).
    """
    if not site_scale > 0:
        raise InvalidArgumentError(f"site_scale must be > 0, got {site_scale}")
    validate_schedule(pulse, calib)
    y = np.array(state0.amplitudes, dtype=np.complex128)
    for _, length, seg in pulse.runs():
        omega = apply_amplitude_calibration(calib, seg.setpoint) * site_scale
        u = segment_propagator(omega, seg.detuning, seg.phase, length * pulse.segment_dt)
        y = u @ y
    return QubitState(y)
