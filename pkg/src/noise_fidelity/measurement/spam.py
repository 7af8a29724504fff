"""SPAM parameter estimation by KL-divergence matching of fidelity distributions."""

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..errors import FitFailedError, InvalidArgumentError
from ..seeding import MEASUREMENT_STREAM, derive_seed
from .density import DEFAULT_BINS, fidelity_edges, histogram_rows, kl_divergence_rows
from .readout import ReadoutSampler

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

# simulate(p01, p10) receives P candidate points and returns, per condition,
# an array of shape (P, n_samples) of simulated measured fidelities.
SimulateFn = Callable[[FloatArray, FloatArray], Sequence[FloatArray]]

TIE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class SpamFit:
    """Result of a SPAM fit."""

    p01: float
    p10: float
    divergence: float
    n_evaluations: int


class ReadoutSimulator:
    """Zero-noise measurement simulator with frozen random draws.

    Each condition is a matrix of true fidelities (realizations x sites). The
    random layers are drawn once, so the objective seen by :func:`fit_spam`
    changes only through (p01, p10).
    """

    def __init__(
        self, conditions: Sequence[FloatArray], n_meas: int, p_c: float, seed: int
    ) -> None:
        self._samplers = [
            [
                ReadoutSampler(row, n_meas, p_c, derive_seed(seed, c, r, MEASUREMENT_STREAM))
                for r, row in enumerate(np.atleast_2d(np.asarray(rows, dtype=np.float64)))
            ]
            for c, rows in enumerate(conditions)
        ]

    def __call__(self, p01: FloatArray, p10: FloatArray) -> list[FloatArray]:
        return [
            np.stack([s.measured_grid(p01, p10) for s in samplers], axis=1)
            for samplers in self._samplers
        ]


def _grid(lo: float, hi: float, step: float) -> FloatArray:
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    values = lo + step * np.arange(n)
    if values[-1] < hi - 1e-12:
        values = np.append(values, hi)
    return np.asarray(values, dtype=np.float64)


class _Objective:
    def __init__(self, experimental: list[FloatArray], simulate: SimulateFn, bins: int) -> None:
        self.edges = fidelity_edges(bins)
        self.simulate = simulate
        self.exp_counts = [histogram_rows(e[None, :], self.edges)[0] for e in experimental]
        if any(c.sum() == 0 for c in self.exp_counts):
            raise InvalidArgumentError("an experimental dataset has no valid samples")
        self.exp_means = [float(np.nanmean(e)) for e in experimental]
        self.n_evaluations = 0

    def __call__(self, p01: FloatArray, p10: FloatArray) -> tuple[FloatArray, FloatArray]:
        sims = self.simulate(p01, p10)
        if len(sims) != len(self.exp_counts):
            raise InvalidArgumentError(
                f"simulator returned {len(sims)} datasets, expected {len(self.exp_counts)}"
            )
        kl = np.zeros(p01.shape[0])
        mismatch = np.zeros(p01.shape[0])
        for counts, mean, sim in zip(self.exp_counts, self.exp_means, sims, strict=True):
            rows = np.atleast_2d(np.asarray(sim, dtype=np.float64))
            if rows.shape[0] != p01.shape[0]:
                raise InvalidArgumentError("simulator must return one row per candidate point")
            kl += kl_divergence_rows(counts, histogram_rows(rows, self.edges))
            valid = np.isfinite(rows)
            n_valid = valid.sum(axis=1)
            total = np.where(valid, rows, 0.0).sum(axis=1)
            sim_mean = np.divide(
                total, n_valid, out=np.full(total.shape, np.nan), where=n_valid > 0
            )
            mismatch += (sim_mean - mean) ** 2
        self.n_evaluations += int(p01.shape[0])
        return kl, mismatch


def _select(kl: FloatArray, mismatch: FloatArray) -> int | None:
    # Lowest divergence; ties broken by the closest sample means.
    finite = np.isfinite(kl)
    if not finite.any():
        return None
    best = kl[finite].min()
    candidates = np.flatnonzero(finite & (kl <= best + TIE_TOLERANCE))
    if candidates.size > 1:
        logger.debug("%d grid points tie at KL %.3e", candidates.size, best)
    tie_break = np.where(np.isfinite(mismatch[candidates]), mismatch[candidates], np.inf)
    return int(candidates[int(np.argmin(tie_break))])


def _search(
    objective: _Objective, grid01: FloatArray, grid10: FloatArray
) -> tuple[float, float, float] | None:
    p01, p10 = (g.ravel() for g in np.meshgrid(grid01, grid10, indexing="ij"))
    kl, mismatch = objective(p01, p10)
    idx = _select(kl, mismatch)
    if idx is None:
        return None
    return float(p01[idx]), float(p10[idx]), float(kl[idx])


def fit_spam(
    experimental: FloatArray | Sequence[FloatArray],
    simulate: SimulateFn,
    *,
    bins: int = DEFAULT_BINS,
    bounds: tuple[tuple[float, float], tuple[float, float]] = ((0.0, 1.0), (0.0, 1.0)),
    coarse_step: float = 0.005,
    fine_step: float = 0.0005,
) -> SpamFit:
    """Estimate (p01, p10) by minimizing the summed KL(experimental || simulated).

    The search evaluates a coarse grid over ``bounds``, then a fine grid within
    one coarse step of the coarse optimum. Among points with equal divergence
    the one whose simulated sample means best match the experimental means wins.

    Args:
        experimental: Measured-fidelity samples, one array per zero-noise condition.
        simulate: Simulator returning one dataset per condition (see ``SimulateFn``).
        bins: Histogram bins on [0, 1].
        bounds: ((p01_min, p01_max), (p10_min, p10_max)).
        coarse_step: Coarse grid spacing.
        fine_step: Refinement grid spacing.

    Returns:
        SpamFit with the minimizer and its divergence.
    """
    if isinstance(experimental, np.ndarray) and experimental.ndim == 1:
        datasets = [np.asarray(experimental, dtype=np.float64)]
    else:
        datasets = [np.asarray(e, dtype=np.float64).reshape(-1) for e in experimental]
    if not datasets:
        raise InvalidArgumentError("at least one experimental dataset is required")
    (lo01, hi01), (lo10, hi10) = bounds
    if not (0.0 <= lo01 <= hi01 <= 1.0 and 0.0 <= lo10 <= hi10 <= 1.0):
        raise InvalidArgumentError(f"bounds {bounds} must lie within [0, 1]")
    if not 0 < fine_step <= coarse_step:
        raise InvalidArgumentError("steps must satisfy 0 < fine_step <= coarse_step")

    objective = _Objective(datasets, simulate, bins)
    coarse = _search(objective, _grid(lo01, hi01, coarse_step), _grid(lo10, hi10, coarse_step))
    if coarse is None:
        raise FitFailedError(
            "KL divergence is non-finite on the whole grid",
            {"evaluations": objective.n_evaluations, "bounds": bounds},
        )
    c01, c10, _ = coarse
    fine = _search(
        objective,
        _grid(max(lo01, c01 - coarse_step), min(hi01, c01 + coarse_step), fine_step),
        _grid(max(lo10, c10 - coarse_step), min(hi10, c10 + coarse_step), fine_step),
    )
    if fine is None:
        raise FitFailedError(
            "KL divergence is non-finite in the refinement window",
            {"evaluations": objective.n_evaluations, "coarse": coarse},
        )
    p01, p10, divergence = fine
    logger.info("SPAM fit: p01=%.4f p10=%.4f KL=%.4g", p01, p10, divergence)
    return SpamFit(p01=p01, p10=p10, divergence=divergence, n_evaluations=objective.n_evaluations)
