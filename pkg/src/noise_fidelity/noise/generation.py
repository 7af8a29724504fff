"""Generation and coarse-graining of amplitude-noise realizations."""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import signal

from ..errors import InvalidArgumentError
from ..schemas import NoiseKind, NoiseParams, whole_steps
from ..seeding import derive_seed, make_rng

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

# Sub-stream used for the intra-step area of the BM path.
_BM_AREA_STREAM = 1


def _frozen(values: FloatArray) -> FloatArray:
    out = np.ascontiguousarray(values, dtype=np.float64)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class NoiseTrace:
    """A sampled noise realization.

    Attributes:
        dt: Timestep in seconds.
        dx: Noise increments dX in phase units (rad).
        dqv: Quadratic-variation increments d[X].
        kind: Noise process.
        seed: Seed the trace was generated from.
        params: Generating parameters, when known.
    """

    dt: float
    dx: FloatArray
    dqv: FloatArray
    kind: NoiseKind
    seed: int
    params: NoiseParams | None = None

    def __post_init__(self) -> None:
        if self.dx.shape != self.dqv.shape or self.dx.ndim != 1:
            raise InvalidArgumentError("dx and dqv must be 1-D arrays of equal length")
        object.__setattr__(self, "dx", _frozen(self.dx))
        object.__setattr__(self, "dqv", _frozen(self.dqv))

    @property
    def n_steps(self) -> int:
        return int(self.dx.shape[0])

    @property
    def duration(self) -> float:
        return self.n_steps * self.dt

    def path(self) -> FloatArray:
        """Cumulative X on the grid, starting at X_0 = 0 (length n_steps + 1)."""
        return np.concatenate(([0.0], np.cumsum(self.dx)))

    def displacement(self, n_steps: int | None = None) -> float:
        """X_t - X_0 after the first ``n_steps`` steps (all steps by default)."""
        n = self.n_steps if n_steps is None else n_steps
        if not 0 <= n <= self.n_steps:
            raise InvalidArgumentError(f"trace has {self.n_steps} steps, requested {n}")
        return float(np.sum(self.dx[:n]))


def wiener_increments(n: int, dt: float, seed: int) -> FloatArray:
    """Draw i.i.d. Wiener increments.

    Args:
        n: Number of increments.
        dt: Timestep in seconds.
        seed: Stream seed.

    Returns:
        Gaussian samples with mean 0 and variance dt.
    """
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    if not dt > 0:
        raise InvalidArgumentError(f"dt must be > 0, got {dt}")
    return make_rng(seed).standard_normal(n) * math.sqrt(dt)


def _ou_increments(dw: FloatArray, gamma: float, kappa: float, dt: float) -> FloatArray:
    # Exact discretization of dX = -kappa X dt + gamma dW started at X_0 = 0.
    decay = math.exp(-kappa * dt)
    if kappa > 0:
        step_sd = gamma * math.sqrt(-math.expm1(-2.0 * kappa * dt) / (2.0 * kappa))
    else:
        step_sd = gamma * math.sqrt(dt)
    innovations = dw * (step_sd / math.sqrt(dt))
    path = signal.lfilter([1.0], [1.0, -decay], innovations)
    return np.diff(path, prepend=0.0)


def _bm_increments(dw: FloatArray, gamma: float, dt: float, seed: int) -> FloatArray:
    # X_t = gamma * int_0^t W_s ds, sampled exactly: each step adds W_k dt plus the
    # area of the Brownian bridge over the step (mean dW dt / 2, variance dt^3 / 12).
    w_start = np.concatenate(([0.0], np.cumsum(dw)[:-1]))
    bridge = make_rng(derive_seed(seed, _BM_AREA_STREAM)).standard_normal(dw.shape[0])
    area = 0.5 * dt * dw + math.sqrt(dt**3 / 12.0) * bridge
    return gamma * (w_start * dt + area)


def generate_trace(params: NoiseParams) -> NoiseTrace:
    """Generate one noise realization on the fine grid.

    Args:
        params: Noise parameters including the seed.

    Returns:
        NoiseTrace with dX and d[X] filled for the requested process.
    """
    n = params.n_steps
    dt = params.fine_dt
    dw = wiener_increments(n, dt, params.seed)

    if params.kind is NoiseKind.WN:
        dx = params.gamma * dw
        dqv = np.full(n, params.gamma**2 * dt)
    elif params.kind is NoiseKind.OU:
        dx = _ou_increments(dw, params.gamma, params.kappa, dt)
        dqv = np.full(n, params.gamma**2 * dt)
    else:
        dx = _bm_increments(dw, params.gamma, dt, params.seed)
        dqv = np.zeros(n)

    logger.debug("Generated %s trace: %d steps, seed %d", params.kind.value, n, params.seed)
    return NoiseTrace(dt=dt, dx=dx, dqv=dqv, kind=params.kind, seed=params.seed, params=params)


def coarsen_trace(trace: NoiseTrace, coarse_dt: float) -> NoiseTrace:
    """Sum increments blockwise onto a coarser grid.

    Args:
        trace: Fine trace.
        coarse_dt: Target timestep, an integer multiple of ``trace.dt``.

    Returns:
        Coarse trace whose per-block displacement equals the fine trace's.
    """
    factor = whole_steps(coarse_dt, trace.dt)
    if factor is None or factor < 1:
        raise InvalidArgumentError(f"coarse_dt {coarse_dt} is not a multiple of dt {trace.dt}")
    if factor == 1:
        return trace
    if trace.n_steps % factor:
        raise InvalidArgumentError(
            f"trace of {trace.n_steps} steps cannot be split into blocks of {factor}"
        )
    dx = trace.dx.reshape(-1, factor).sum(axis=1)
    dqv = trace.dqv.reshape(-1, factor).sum(axis=1)
    return NoiseTrace(
        dt=factor * trace.dt,
        dx=dx,
        dqv=dqv,
        kind=trace.kind,
        seed=trace.seed,
        params=trace.params,
    )


def stack_increments(
    traces: Sequence[NoiseTrace], n_steps: int | None = None
) -> tuple[FloatArray, FloatArray]:
    """Stack the first ``n_steps`` increments of equally sampled traces into 2-D arrays."""
    if not traces:
        raise InvalidArgumentError("at least one trace is required")
    dt = traces[0].dt
    n = min(t.n_steps for t in traces) if n_steps is None else n_steps
    for t in traces:
        if t.dt != dt:
            raise InvalidArgumentError("all traces must share the same dt")
        if t.n_steps < n:
            raise InvalidArgumentError(f"trace with {t.n_steps} steps is shorter than {n}")
    dx = np.stack([t.dx[:n] for t in traces])
    dqv = np.stack([t.dqv[:n] for t in traces])
    return dx, dqv
