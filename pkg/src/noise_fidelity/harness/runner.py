"""Ensemble fan-out: noise realizations x sites -> FidelityEnsemble.

Realizations are split into fixed-size chunks. Each chunk generates its own
traces from derived seeds, integrates every (realization, site) row in one
batch and applies the measurement model, so a chunk's result depends only on
its realization indices. Chunks run in a process pool when ``workers > 1`` and
are reassembled in index order.
"""

import logging
from collections.abc import Mapping, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..dynamics import QubitState, evolve_ideal, integrate_sse_batch
from ..errors import InvalidArgumentError
from ..measurement import FidelityEnsemble, measure_rows
from ..noise import NoiseTrace, coarsen_trace, generate_trace
from ..schemas import (
    AmplitudeCalibration,
    ArrayModel,
    NoiseKind,
    NoiseMode,
    NoiseParams,
    PulseSchedule,
    whole_steps,
)
from ..seeding import MEASUREMENT_STREAM, NOISE_STREAM, derive_seed

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


@dataclass(frozen=True)
class EnsembleSpec:
    """Everything needed to simulate one ensemble point."""

    kind: NoiseKind
    gamma: float
    kappa: float
    fine_dt: float
    pulse: PulseSchedule
    calib: AmplitudeCalibration
    model: ArrayModel
    seed: int
    noise_mode: NoiseMode = NoiseMode.RABI
    measure: bool = True

    def noise_params(self, realization: int) -> NoiseParams | None:
        """Generating parameters of one realization; None without a noise window."""
        n_noise = self.pulse.n_noise_steps
        if n_noise == 0:
            return None
        return NoiseParams(
            kind=self.kind,
            gamma=self.gamma,
            kappa=self.kappa,
            fine_dt=self.fine_dt,
            duration=n_noise * self.pulse.segment_dt,
            seed=derive_seed(self.seed, realization, NOISE_STREAM),
        )

    def trace(self, realization: int) -> NoiseTrace | None:
        """Fine-grid noise trace of one realization."""
        params = self.noise_params(realization)
        return None if params is None else generate_trace(params)

    def metadata(self) -> dict[str, object]:
        return {
            "kind": self.kind.value,
            "gamma": self.gamma,
            "kappa": self.kappa,
            "t": self.pulse.noise_duration,
            "fine_dt": self.fine_dt,
            "segment_dt": self.pulse.segment_dt,
            "noise_mode": self.noise_mode.value,
            "seed": self.seed,
        }


def window_increments(
    trace: NoiseTrace | None, pulse: PulseSchedule
) -> tuple[FloatArray, FloatArray]:
    """Increments of ``trace`` over the pulse's noise window, summed onto the segment grid."""
    n_noise = pulse.n_noise_steps
    if n_noise == 0 or trace is None:
        if n_noise:
            raise InvalidArgumentError("a noise trace is required for a non-empty noise window")
        return np.zeros(0), np.zeros(0)
    factor = whole_steps(pulse.segment_dt, trace.dt)
    if factor is None or factor < 1:
        raise InvalidArgumentError(
            f"segment_dt {pulse.segment_dt} is not a multiple of the trace dt {trace.dt}"
        )
    need = n_noise * factor
    if trace.n_steps < need:
        raise InvalidArgumentError(
            f"trace covers {trace.n_steps} steps but the noise window needs {need}"
        )
    window = NoiseTrace(
        dt=trace.dt, dx=trace.dx[:need], dqv=trace.dqv[:need], kind=trace.kind, seed=trace.seed
    )
    coarse = coarsen_trace(window, pulse.segment_dt)
    return np.asarray(coarse.dx), np.asarray(coarse.dqv)


def _targets(spec: EnsembleSpec) -> npt.NDArray[np.complex128]:
    ground = QubitState.ground()
    return np.stack(
        [
            evolve_ideal(spec.pulse, spec.calib, ground, float(scale)).amplitudes
            for scale in spec.model.site_scales
        ]
    )


@dataclass(frozen=True)
class _Chunk:
    spec: EnsembleSpec
    ids: tuple[int, ...]
    traces: tuple[NoiseTrace | None, ...] | None = None  # None: generate from seeds


@dataclass(frozen=True)
class _ChunkResult:
    f_true: FloatArray
    f_measured: FloatArray
    displacements: FloatArray


def _simulate_chunk(chunk: _Chunk) -> _ChunkResult:
    spec = chunk.spec
    traces = chunk.traces if chunk.traces is not None else tuple(spec.trace(i) for i in chunk.ids)
    n_sites = spec.model.n_sites
    n = len(chunk.ids)

    if spec.pulse.n_noise_steps:
        windows = [window_increments(t, spec.pulse) for t in traces]
        dx = np.stack([w[0] for w in windows])
        dqv = np.stack([w[1] for w in windows])
    else:
        dx = dqv = np.zeros((n, 0))

    batch = integrate_sse_batch(
        spec.pulse,
        spec.calib,
        np.repeat(dx, n_sites, axis=0),
        np.repeat(dqv, n_sites, axis=0),
        spec.pulse.segment_dt,
        np.tile(np.asarray(spec.model.site_scales), n),
        QubitState.ground(),
        spec.noise_mode,
    )
    targets = np.tile(_targets(spec), (n, 1))
    overlap = np.sum(np.conj(targets) * batch.states, axis=1)
    f_true = np.clip(np.abs(overlap) ** 2, 0.0, 1.0).reshape(n, n_sites)

    if spec.measure:
        seeds = [derive_seed(spec.seed, i, MEASUREMENT_STREAM) for i in chunk.ids]
        f_measured = measure_rows(f_true, spec.model, seeds)
    else:
        f_measured = np.full(n, np.nan)
    logger.debug("Simulated realizations %d-%d", chunk.ids[0], chunk.ids[-1])
    return _ChunkResult(f_true=f_true, f_measured=f_measured, displacements=dx.sum(axis=1))


def _execute(chunks: list[_Chunk], workers: int) -> list[_ChunkResult]:
    if workers <= 1 or len(chunks) <= 1:
        return [_simulate_chunk(c) for c in chunks]
    with ProcessPoolExecutor(max_workers=min(workers, len(chunks))) as pool:
        return list(pool.map(_simulate_chunk, chunks))


def _assemble(
    spec: EnsembleSpec, ids: Sequence[int], results: list[_ChunkResult]
) -> FidelityEnsemble:
    return FidelityEnsemble(
        f_true=np.concatenate([r.f_true for r in results]),
        f_measured=np.concatenate([r.f_measured for r in results]),
        displacements=np.concatenate([r.displacements for r in results]),
        realization_ids=np.asarray(ids, dtype=np.int64),
        metadata=spec.metadata(),
    )


def _split(ids: Sequence[int], chunk_size: int) -> list[tuple[int, ...]]:
    if chunk_size < 1:
        raise InvalidArgumentError(f"chunk_size must be >= 1, got {chunk_size}")
    return [tuple(ids[k : k + chunk_size]) for k in range(0, len(ids), chunk_size)]


def run_ensemble(
    spec: EnsembleSpec,
    n_realizations: int,
    workers: int = 1,
    chunk_size: int = 25,
) -> FidelityEnsemble:
    """Simulate ``n_realizations`` noise realizations across all sites.

    Args:
        spec: Ensemble point.
        n_realizations: Number of realizations N_r.
        workers: Worker processes; results do not depend on this.
        chunk_size: Realizations per work item.

    Returns:
        FidelityEnsemble with realizations 0..N_r-1.
    """
    if n_realizations < 1:
        raise InvalidArgumentError(f"n_realizations must be >= 1, got {n_realizations}")
    ids = list(range(n_realizations))
    chunks = [_Chunk(spec=spec, ids=c) for c in _split(ids, chunk_size)]
    ensemble = _assemble(spec, ids, _execute(chunks, workers))
    logger.info(
        "Ensemble %s gamma=%g t=%g: %d realizations x %d sites",
        spec.kind.value,
        spec.gamma,
        spec.pulse.noise_duration,
        n_realizations,
        spec.model.n_sites,
    )
    return ensemble


def run_ensemble_from_traces(
    spec: EnsembleSpec,
    traces: Mapping[int, NoiseTrace],
    workers: int = 1,
    chunk_size: int = 25,
) -> FidelityEnsemble:
    """Simulate an ensemble driven by given traces, keyed by realization ID.

    Measurement seeds are derived from the realization IDs, so replaying the
    traces a run persisted reproduces that run's measured fidelities.
    """
    if not traces:
        raise InvalidArgumentError("at least one trace is required")
    ids = sorted(traces)
    chunks = [
        _Chunk(spec=spec, ids=c, traces=tuple(traces[i] for i in c))
        for c in _split(ids, chunk_size)
    ]
    return _assemble(spec, ids, _execute(chunks, workers))
