"""Measurement model: atom presence, projective readout and SPAM flips."""

import logging
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from ..errors import InvalidArgumentError
from ..schemas import ArrayModel
from ..seeding import make_rng

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]


def sample_site_scales(n_sites: int, cv: float, seed: int) -> FloatArray:
    """Draw per-site Rabi scale factors with the given coefficient of variation.

    Scales are Gaussian around 1 and rescaled so their mean is exactly 1.
    """
    if n_sites < 1:
        raise InvalidArgumentError(f"n_sites must be >= 1, got {n_sites}")
    if cv < 0:
        raise InvalidArgumentError(f"cv must be >= 0, got {cv}")
    if cv == 0:
        return np.ones(n_sites)
    scales = 1.0 + cv * make_rng(seed).standard_normal(n_sites)
    scales /= scales.mean()
    if np.any(scales <= 0):
        raise InvalidArgumentError(f"cv {cv} produced non-positive Rabi scales")
    return scales


class ReadoutSampler:
    """Random draws of one realization's measurements, SPAM parameters left free.

    Four uniform layers are drawn per measurement index (site, shot): atom
    presence, projective outcome, 1->0 flip and 0->1 flip. A valid shot reads 1
    when the outcome is 1 and no 1->0 flip occurs, or when the outcome is 0 and a
    0->1 flip occurs, so E[F_m] = F (1 - p10) + (1 - F) p01. Flip uniforms are
    kept sorted, which makes re-evaluating the same draws at other (p01, p10)
    a binary search.
    """

    def __init__(self, f_true: FloatArray, n_meas: int, p_c: float, seed: int) -> None:
        """Draw the random layers.

        Args:
            f_true: True fidelity per site.
            n_meas: Shots per site.
            p_c: Atom presence probability.
            seed: Stream seed of this realization.
        """
        f_row = np.asarray(f_true, dtype=np.float64).reshape(-1)
        if f_row.size * n_meas < 1:
            raise InvalidArgumentError("at least one measurement is required")
        rng = make_rng(seed)
        shape = (f_row.size, n_meas)
        present = rng.random(shape) < p_c
        outcome = rng.random(shape) < f_row[:, None]
        u10 = rng.random(shape)
        u01 = rng.random(shape)

        self.n_valid = int(np.count_nonzero(present))
        self._u10 = np.sort(u10[present & outcome])
        self._u01 = np.sort(u01[present & ~outcome])

    def measured(self, p01: float, p10: float) -> float | None:
        """Measured fidelity F_m, or None when no atom was present."""
        if self.n_valid == 0:
            return None
        kept = self._u10.size - int(np.searchsorted(self._u10, p10, side="left"))
        gained = int(np.searchsorted(self._u01, p01, side="left"))
        return (kept + gained) / self.n_valid

    def measured_grid(self, p01: FloatArray, p10: FloatArray) -> FloatArray:
        """Measured fidelity at many (p01, p10) points; NaN when no atom was present."""
        p01 = np.asarray(p01, dtype=np.float64)
        p10 = np.asarray(p10, dtype=np.float64)
        if self.n_valid == 0:
            return np.full(np.broadcast(p01, p10).shape, np.nan)
        kept = self._u10.size - np.searchsorted(self._u10, p10, side="left")
        gained = np.searchsorted(self._u01, p01, side="left")
        return np.asarray((kept + gained) / self.n_valid, dtype=np.float64)


def simulate_measurements(f_true: FloatArray, model: ArrayModel, seed: int) -> float | None:
    """Measured fidelity of one realization.

    Args:
        f_true: True fidelity per site, length ``model.n_sites``.
        model: Array and SPAM parameters.
        seed: Stream seed.

    Returns:
        F_m, or None when every measurement was discarded for lack of an atom.
    """
    f_row = np.asarray(f_true, dtype=np.float64).reshape(-1)
    if f_row.size != model.n_sites:
        raise InvalidArgumentError(f"expected {model.n_sites} site fidelities, got {f_row.size}")
    result = ReadoutSampler(f_row, model.n_meas, model.p_c, seed).measured(model.p01, model.p10)
    if result is None:
        logger.warning("No atom present in any measurement (seed %d); F_m is missing", seed)
    return result


def measure_rows(f_true: FloatArray, model: ArrayModel, seeds: Sequence[int]) -> FloatArray:
    """Measured fidelity per realization row, NaN where data is missing."""
    rows = np.atleast_2d(np.asarray(f_true, dtype=np.float64))
    if rows.shape[0] != len(seeds):
        raise InvalidArgumentError("one seed per realization row is required")
    out = np.empty(rows.shape[0])
    for i, (row, seed) in enumerate(zip(rows, seeds, strict=True)):
        value = simulate_measurements(row, model, seed)
        out[i] = np.nan if value is None else value
    return out
