"""Randomized benchmarking: sequences, pulse compilation, simulation and decay fits."""

import logging
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt
from scipy import optimize

from ..dynamics import QubitState, integrate_sse_batch
from ..errors import FitFailedError, InvalidArgumentError
from ..measurement import simulate_measurements
from ..noise import generate_trace
from ..schemas import (
    AmplitudeCalibration,
    ArrayModel,
    NoiseParams,
    PulseSchedule,
    RBConfig,
    Segment,
)
from ..seeding import MEASUREMENT_STREAM, NOISE_STREAM, SEQUENCE_STREAM, derive_seed, make_rng
from .clifford import GROUP_ORDER, clifford_group, inverse_table, multiplication_table
from .composite import expand

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

_CEIL_TOLERANCE = 1e-9
# Fitted d at or below this is the lower bound of the fit: no decay.
D_ZERO_TOLERANCE = 1e-8


@dataclass(frozen=True)
class RBSequence:
    """Random Cliffords followed by the inversion gate."""

    gates: tuple[int, ...]
    inversion: int

    def indices(self) -> tuple[int, ...]:
        return (*self.gates, self.inversion)


def rb_sequence(n_cliffords: int, seed: int) -> RBSequence:
    """Draw ``n_cliffords`` uniform Cliffords and the gate returning the qubit to |0>."""
    if n_cliffords < 1:
        raise InvalidArgumentError(f"n_cliffords must be >= 1, got {n_cliffords}")
    gates = tuple(int(g) for g in make_rng(seed).integers(0, GROUP_ORDER, size=n_cliffords))
    table = multiplication_table()
    total = 0
    for g in gates:
        total = table[total][g]
    return RBSequence(gates=gates, inversion=inverse_table()[total])


def average_pulse_area(composite: bool) -> float:
    """Mean total rotation angle per Clifford, in radians."""
    areas = [
        sum(r.angle for rot in gate.decomposition for r in expand(rot, composite))
        for gate in clifford_group()
    ]
    return float(np.mean(areas))


def compile_sequence(
    indices: Sequence[int],
    config: RBConfig,
    calib: AmplitudeCalibration,
    noisy: bool = True,
) -> PulseSchedule:
    """Compile Clifford indices into a segment schedule.

    Each rotation runs for a whole number of segments at or below the maximum
    Rabi frequency and at least ``calib.min_segment``; the drive is lowered so
    the rotation angle comes out exact.

    Args:
        indices: Clifford indices in application order.
        config: Benchmarking parameters (Rabi ceiling, segment length, composite flag).
        calib: Calibration used to convert Rabi frequencies to setpoints.
        noisy: Whether noise acts over the whole schedule.

    Returns:
        PulseSchedule; an empty rotation list compiles to one idle segment.
    """
    group = clifford_group()
    dt = config.segment_dt
    min_segments = max(1, math.ceil(calib.min_segment / dt - _CEIL_TOLERANCE))
    segments: list[Segment] = []
    for index in indices:
        for rotation in group[index].decomposition:
            for pulse in expand(rotation, config.composite):
                n_seg = math.ceil(pulse.angle / (config.rabi * dt) - _CEIL_TOLERANCE)
                n_seg = max(n_seg, min_segments)
                omega = pulse.angle / (n_seg * dt)
                segment = Segment(setpoint=calib.setpoint_for(omega), phase=pulse.phase)
                segments.extend([segment] * n_seg)
    if not segments:
        segments = [Segment(setpoint=0.0)] * min_segments
    total = len(segments) * dt
    return PulseSchedule(
        segment_dt=dt, segments=tuple(segments), noise_duration=total if noisy else 0.0
    )


@dataclass(frozen=True)
class RBResult:
    """Survival probabilities of a benchmarking campaign.

    Attributes:
        lengths: Number of random Cliffords per sequence.
        probabilities: Measured |0> probability, shape (n_lengths, n_sequences); NaN if missing.
        true_p0: Site-averaged true |0> population, same shape.
        average_area: Mean rotation angle per Clifford (rad).
    """

    lengths: tuple[int, ...]
    probabilities: FloatArray
    true_p0: FloatArray
    average_area: float

    def mean_probabilities(self) -> FloatArray:
        return np.asarray(np.nanmean(self.probabilities, axis=1), dtype=np.float64)

    def rows(self) -> Iterator[dict[str, Any]]:
        """One row per (length, sequence)."""
        for li, n in enumerate(self.lengths):
            for s in range(self.probabilities.shape[1]):
                p = float(self.probabilities[li, s])
                yield {
                    "length": n,
                    "sequence": s,
                    "P0_measured": p if math.isfinite(p) else None,
                    "P0_true": float(self.true_p0[li, s]),
                }


def run_rb(
    config: RBConfig,
    model: ArrayModel,
    calib: AmplitudeCalibration | None = None,
    seed: int = 0,
) -> RBResult:
    """Simulate a randomized benchmarking campaign.

    Every (length, sequence) pair gets derived seeds for its gate draw, its noise
    trace and its readout, so results do not depend on evaluation order.

    Args:
        config: Benchmarking parameters.
        model: Array model; its SPAM parameters apply, shots come from ``config.n_meas``.
        calib: Amplitude calibration, identity by default.
        seed: Master seed.

    Returns:
        RBResult with one probability per (length, sequence).
    """
    calib = calib or AmplitudeCalibration.identity()
    readout = ArrayModel(**{**model.model_dump(), "n_meas": config.n_meas})
    scales = np.asarray(model.site_scales, dtype=np.float64)
    ground = QubitState.ground()
    noisy = config.noise_kind is not None

    shape = (len(config.lengths), config.n_sequences)
    probabilities = np.full(shape, np.nan)
    true_p0 = np.empty(shape)
    for li, n in enumerate(config.lengths):
        for s in range(config.n_sequences):
            sequence = rb_sequence(n, derive_seed(seed, li, s, SEQUENCE_STREAM))
            pulse = compile_sequence(sequence.indices(), config, calib, noisy=noisy)
            n_steps = len(pulse.segments)
            if config.noise_kind is not None:
                trace = generate_trace(
                    NoiseParams(
                        kind=config.noise_kind,
                        gamma=config.gamma,
                        kappa=config.kappa,
                        fine_dt=config.segment_dt,
                        duration=pulse.total_duration,
                        seed=derive_seed(seed, li, s, NOISE_STREAM),
                    )
                )
                dx, dqv = trace.dx, trace.dqv
            else:
                dx = dqv = np.zeros(n_steps)
            batch = integrate_sse_batch(
                pulse,
                calib,
                np.tile(dx, (scales.size, 1)),
                np.tile(dqv, (scales.size, 1)),
                config.segment_dt,
                scales,
                ground,
            )
            p0 = np.clip(np.abs(batch.states[:, 0]) ** 2, 0.0, 1.0)
            true_p0[li, s] = float(p0.mean())
            measured = simulate_measurements(
                p0, readout, derive_seed(seed, li, s, MEASUREMENT_STREAM)
            )
            if measured is not None:
                probabilities[li, s] = measured
        logger.info(
            "RB length %d: mean P0 %.4f over %d sequences",
            n,
            float(np.nanmean(probabilities[li])),
            config.n_sequences,
        )
    return RBResult(
        lengths=tuple(config.lengths),
        probabilities=probabilities,
        true_p0=true_p0,
        average_area=average_pulse_area(config.composite),
    )


@dataclass(frozen=True)
class RBFit:
    """Fitted decay P(n) = 1/2 + 1/2 (1 - d0) (1 - d)^n."""

    d0: float
    d: float
    fidelity: float
    d0_err: float
    d_err: float
    fidelity_err: float


def rb_decay(n: FloatArray, d0: float, d: float) -> FloatArray:
    return 0.5 + 0.5 * (1.0 - d0) * (1.0 - d) ** n


def _initial_guess(x: FloatArray, y: FloatArray) -> tuple[float, float]:
    n_lo, n_hi = float(x.min()), float(x.max())
    y_lo = float(y[x == n_lo].mean()) - 0.5
    y_hi = float(y[x == n_hi].mean()) - 0.5
    d0 = min(max(1.0 - 2.0 * y_lo, 0.0), 0.5)
    if y_lo > 0 and y_hi > 0:
        d = 1.0 - (y_hi / y_lo) ** (1.0 / (n_hi - n_lo))
    else:
        d = 1.0 / n_hi
    return d0, min(max(d, 0.0), 0.99)


def fit_rb_decay(lengths: Sequence[int], probabilities: FloatArray) -> RBFit:
    """Least-squares fit of the benchmarking decay.

    Args:
        lengths: Clifford counts, one per row of ``probabilities``.
        probabilities: Survival probabilities, shape (n_lengths,) or
            (n_lengths, n_sequences); NaN entries are ignored.

    Returns:
        RBFit with d0, d, the Clifford fidelity 1 - d/2 and 1-sigma errors.
    """
    n = np.asarray(lengths, dtype=np.float64)
    y = np.asarray(probabilities, dtype=np.float64)
    if y.ndim == 1:
        y = y[:, None]
    if y.shape[0] != n.size:
        raise InvalidArgumentError("one probability row per length is required")
    x = np.repeat(n, y.shape[1])
    values = y.reshape(-1)
    valid = np.isfinite(values)
    x, values = x[valid], values[valid]
    if np.unique(x).size < 3:
        raise InvalidArgumentError("the decay fit needs at least 3 distinct lengths with data")

    try:
        popt, pcov = optimize.curve_fit(
            rb_decay, x, values, p0=_initial_guess(x, values), bounds=([0.0, 0.0], [1.0, 1.0])
        )
    except (RuntimeError, ValueError) as e:
        raise FitFailedError(f"decay fit failed: {e}", {"n_points": int(x.size)}) from e

    d0, d = (float(v) for v in popt)
    errors = np.sqrt(np.diag(pcov)) if np.all(np.isfinite(pcov)) else np.full(2, np.nan)
    if not np.all(np.isfinite(errors)):
        logger.warning("Decay fit covariance is not finite; uncertainties are NaN")
    d0_err, d_err = (float(v) for v in errors)
    if d <= D_ZERO_TOLERANCE:
        logger.debug("Decay rate %.3g is consistent with zero", d)
        d = 0.0
    return RBFit(
        d0=d0, d=d, fidelity=1.0 - d / 2.0, d0_err=d0_err, d_err=d_err, fidelity_err=d_err / 2.0
    )
