"""Per-realization, per-site fidelity ensembles."""

import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import numpy.typing as npt

from ..errors import InvalidArgumentError

FloatArray = npt.NDArray[np.float64]
IntArray = npt.NDArray[np.int64]

_RANGE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class FidelityEnsemble:
    """True and measured fidelities of an ensemble of noise realizations.

    Attributes:
        f_true: Matrix (N_r, N_a) of true per-site fidelities F_ij.
        f_measured: Measured fidelity F_m per realization, NaN where missing.
        displacements: X_t - X_0 of each realization's noise.
        realization_ids: Realization index of each row.
        metadata: Noise kind, gamma, kappa, t, seed and related provenance.
    """

    f_true: FloatArray
    f_measured: FloatArray
    displacements: FloatArray
    realization_ids: IntArray
    metadata: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n_r = self.f_true.shape[0]
        if self.f_true.ndim != 2:
            raise InvalidArgumentError("f_true must be a (realizations, sites) matrix")
        for name in ("f_measured", "displacements", "realization_ids"):
            if getattr(self, name).shape != (n_r,):
                raise InvalidArgumentError(f"{name} must have one entry per realization")
        measured = self.f_measured[np.isfinite(self.f_measured)]
        for values in (self.f_true, measured):
            if values.size and (
                values.min() < -_RANGE_TOLERANCE or values.max() > 1 + _RANGE_TOLERANCE
            ):
                raise InvalidArgumentError("fidelities must lie in [0, 1]")

    @property
    def n_realizations(self) -> int:
        return int(self.f_true.shape[0])

    @property
    def n_sites(self) -> int:
        return int(self.f_true.shape[1])

    def site_mean(self) -> FloatArray:
        """Mean true fidelity of each realization over sites."""
        return np.asarray(self.f_true.mean(axis=1), dtype=np.float64)

    def summary(self) -> dict[str, Any]:
        """Sample statistics of the true and measured fidelities."""
        per_realization = self.site_mean()
        measured = self.f_measured[np.isfinite(self.f_measured)]
        n = per_realization.size
        std = float(per_realization.std(ddof=1)) if n > 1 else 0.0
        m_std = float(measured.std(ddof=1)) if measured.size > 1 else 0.0
        return {
            "n_realizations": n,
            "n_sites": self.n_sites,
            "true_mean": float(per_realization.mean()),
            "true_std": std,
            "true_se": std / math.sqrt(n) if n else 0.0,
            "measured_mean": float(measured.mean()) if measured.size else None,
            "measured_std": m_std,
            "measured_se": m_std / math.sqrt(measured.size) if measured.size else None,
            "n_missing": int(n - measured.size),
        }

    def long_rows(self) -> Iterator[dict[str, Any]]:
        """Rows (realization, site, F_true) in long form."""
        for rid, row in zip(self.realization_ids, self.f_true, strict=True):
            for site, value in enumerate(row):
                yield {"realization": int(rid), "site": site, "F_true": float(value)}

    def measurement_rows(self) -> Iterator[dict[str, Any]]:
        """Rows (realization, F_measured); missing values are None."""
        for rid, value in zip(self.realization_ids, self.f_measured, strict=True):
            yield {
                "realization": int(rid),
                "F_measured": float(value) if math.isfinite(value) else None,
            }
