"""Stochastic Schrodinger equation with amplitude noise.

Each noisy step uses Strang splitting: half a step of the exact drive
propagator, the noise substep, then the other half. The noise substep solves
``dpsi = -1/2 S^dagger S psi d[X] - i S psi dX`` where S is the drive axis
operator of the current segment:

* rows whose increment carries quadratic variation (WN, OU) take one Platen
  step with diffusion ``-i g S psi``, ``g = sqrt(d[X]/dt)`` and standard-normal
  draw ``dX / sqrt(d[X])``;
* finite-variation rows (BM, or zero noise) apply the exact rotation
  ``exp(-i S dX)``.

Platen therefore integrates the noise terms only. The drive Hamiltonian is
not part of its drift, unlike a single Platen step over the full SSE; with
zero noise every step reduces to the exact propagator, and the weak order
in dt is unchanged.

States are renormalized after every noise substep. Steps after the noise
window use one exact propagator per run of identical segments.
"""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..errors import IntegrationDivergedError, InvalidArgumentError
from ..noise import NoiseTrace
from ..schemas import AmplitudeCalibration, NoiseMode, PulseSchedule
from .evolution import apply_elements, propagator_elements, validate_schedule
from .platen import platen_step
from .states import ComplexArray, QubitState

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

NORM_DRIFT_LIMIT = 1e-3
DT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class BatchResult:
    """Final states of a batch of trajectories."""

    states: ComplexArray  # shape (n, 2)
    max_norm_drift: float  # largest |norm - 1| seen before renormalization


def _apply_noise_operator(y: ComplexArray, phase: float) -> ComplexArray:
    # S = [[0, e^{-i phase}], [e^{i phase}, 0]]
    rotor = np.exp(-1j * phase)
    return np.stack((rotor * y[:, 1], np.conj(rotor) * y[:, 0]), axis=1)


def _noise_substep(
    y: ComplexArray,
    dx: FloatArray,
    dqv: FloatArray,
    dt: float,
    phase: float,
) -> tuple[ComplexArray, float]:
    diffusive = dqv > 0.0
    gain = np.sqrt(dqv / dt)[:, None]
    gaussian = np.divide(dx, np.sqrt(dqv), out=np.zeros_like(dx), where=diffusive)[:, None]

    def drift(v: ComplexArray) -> ComplexArray:
        return -0.5 * gain * gain * v

    def diffusion(v: ComplexArray) -> ComplexArray:
        return -1j * gain * _apply_noise_operator(v, phase)

    stepped = platen_step(y, drift, diffusion, dt, gaussian)
    rotated = np.cos(dx)[:, None] * y - 1j * np.sin(dx)[:, None] * _apply_noise_operator(y, phase)
    y_new = np.where(diffusive[:, None], stepped, rotated)

    norms = np.sum((y_new * np.conj(y_new)).real, axis=1)
    if not np.all(np.isfinite(norms)):
        raise IntegrationDivergedError("non-finite state norm")
    drift_max = float(np.max(np.abs(norms - 1.0))) if norms.size else 0.0
    if drift_max > NORM_DRIFT_LIMIT:
        raise IntegrationDivergedError(
            f"norm drift {drift_max:.3e} exceeds {NORM_DRIFT_LIMIT:.0e}; reduce the timestep"
        )
    return y_new / np.sqrt(norms)[:, None], drift_max


def integrate_sse_batch(
    pulse: PulseSchedule,
    calib: AmplitudeCalibration,
    dx: FloatArray,
    dqv: FloatArray,
    dt: float,
    site_scales: float | FloatArray,
    state0: QubitState,
    noise_mode: NoiseMode = NoiseMode.RABI,
) -> BatchResult:
    """Integrate many trajectories at once.

    Every row is an independent trajectory; arithmetic is elementwise per row,
    so a row's result does not depend on the rest of the batch.

    Args:
        pulse: Drive schedule; noise acts during its first ``noise_duration``.
        calib: Amplitude calibration curve.
        dx: Noise increments, shape (n, m) with m >= pulse.n_noise_steps.
        dqv: Quadratic-variation increments, same shape as ``dx``.
        dt: Timestep of the increments; must equal ``pulse.segment_dt``.
        site_scales: Rabi multiplier per row (scalar or shape (n,)).
        state0: Initial state shared by all rows.
        noise_mode: Whether noise is additive in Rabi frequency or in setpoint.

    Returns:
        BatchResult with final states of shape (n, 2).
    """
    dx = np.atleast_2d(np.asarray(dx, dtype=np.float64))
    dqv = np.atleast_2d(np.asarray(dqv, dtype=np.float64))
    if dx.shape != dqv.shape:
        raise InvalidArgumentError("dx and dqv must have the same shape")
    n_rows = dx.shape[0]
    scales = np.broadcast_to(np.asarray(site_scales, dtype=np.float64), (n_rows,)).copy()
    if not np.all(scales > 0):
        raise InvalidArgumentError("site scales must be > 0")
    seg_dt = pulse.segment_dt
    if abs(dt - seg_dt) > DT_TOLERANCE * seg_dt:
        raise InvalidArgumentError(f"trace dt {dt} does not match segment_dt {seg_dt}")
    n_noise = pulse.n_noise_steps
    if dx.shape[1] < n_noise:
        raise InvalidArgumentError(
            f"trace covers {dx.shape[1]} steps but the noise window needs {n_noise}"
        )
    validate_schedule(pulse, calib)

    y = np.tile(np.asarray(state0.amplitudes, dtype=np.complex128), (n_rows, 1))
    max_drift = 0.0
    for start, length, seg in pulse.runs():
        omega = calib.rabi_frequency(seg.setpoint) * scales
        noisy_end = min(start + length, n_noise)
        if noisy_end > start:
            half = propagator_elements(omega, seg.detuning, seg.phase, 0.5 * seg_dt)
            slope = calib.slope(seg.setpoint) if noise_mode is NoiseMode.SETPOINT else 1.0
            for k in range(start, noisy_end):
                y = apply_elements(half, y)
                y, drift = _noise_substep(
                    y, slope * dx[:, k], slope * slope * dqv[:, k], seg_dt, seg.phase
                )
                max_drift = max(max_drift, drift)
                y = apply_elements(half, y)
        quiet = start + length - max(noisy_end, start)
        if quiet > 0:
            tail = propagator_elements(omega, seg.detuning, seg.phase, quiet * seg_dt)
            y = apply_elements(tail, y)

    logger.debug("Integrated %d trajectories, max norm drift %.2e", n_rows, max_drift)
    return BatchResult(states=y, max_norm_drift=max_drift)


def integrate_sse(
    pulse: PulseSchedule,
    calib: AmplitudeCalibration,
    trace: NoiseTrace,
    site_scale: float = 1.0,
    state0: QubitState | None = None,
    noise_mode: NoiseMode = NoiseMode.RABI,
) -> QubitState:
    """Integrate one trajectory driven by ``trace``.

    Args:
        pulse: Drive schedule.
        calib: Amplitude calibration curve.
        trace: Noise realization sampled at ``pulse.segment_dt``.
        site_scale: Rabi multiplier of the site, > 0.
        state0: Initial state, |0> by default.
        noise_mode: Where the noise enters relative to the calibration.

    Returns:
        Final renormalized state.
    """
    n_noise = pulse.n_noise_steps
    if trace.n_steps < n_noise:
        raise InvalidArgumentError(
            f"trace covers {trace.n_steps} steps but the noise window needs {n_noise}"
        )
    result = integrate_sse_batch(
        pulse,
        calib,
        trace.dx[None, :n_noise],
        trace.dqv[None, :n_noise],
        trace.dt,
        site_scale,
        state0 or QubitState.ground(),
        noise_mode,
    )
    return QubitState.normalized(result.states[0])
