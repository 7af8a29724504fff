"""Randomized benchmarking campaign and composite-pulse robustness."""

import logging
import math
from typing import Any

import numpy as np
import numpy.typing as npt

from ..benchmarking import (
    RBFit,
    Rotation,
    fit_rb_decay,
    rb_decay,
    rotation_error_infidelity,
    run_rb,
    scrofulous,
)
from ..config import ExperimentConfig
from ..errors import FitFailedError
from ..outputs import OutputManager, PlotSpec, Table
from ..schemas import ExperimentKind
from .base import BaseExperiment

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

ROBUSTNESS_TARGETS = {"x90": Rotation(math.pi / 2, 0.0), "x180": Rotation(math.pi, 0.0)}
ROBUSTNESS_EPSILONS = np.logspace(-3, -2, 11)


def _loglog_slope(x: FloatArray, y: FloatArray) -> float:
    positive = y > 0
    if positive.sum() < 2:
        return math.nan
    return float(np.polyfit(np.log10(x[positive]), np.log10(y[positive]), 1)[0])


def composite_robustness(
    epsilons: FloatArray = ROBUSTNESS_EPSILONS,
) -> tuple[list[dict[str, Any]], dict[str, float]]:
    """Infidelity of plain and SCROFULOUS pulses under fractional pulse-length error.

    Returns:
        Rows per epsilon and the log-log slope of every column.
    """
    columns: dict[str, list[float]] = {}
    for name, target in ROBUSTNESS_TARGETS.items():
        composite = scrofulous(target.angle, target.phase)
        columns[f"plain_{name}"] = [
            rotation_error_infidelity([target], target, float(e)) for e in epsilons
        ]
        columns[f"scrofulous_{name}"] = [
            rotation_error_infidelity(composite, target, float(e)) for e in epsilons
        ]
    rows = [
        {"epsilon": float(e), **{k: v[i] for k, v in columns.items()}}
        for i, e in enumerate(epsilons)
    ]
    slopes = {k: _loglog_slope(epsilons, np.asarray(v)) for k, v in columns.items()}
    return rows, slopes


class RBExperiment(BaseExperiment):
    """Survival probability against sequence length, decay fit and pulse robustness."""

    kind = ExperimentKind.RB

    def __init__(
        self,
        config: ExperimentConfig | None = None,
        output_manager: OutputManager | None = None,
    ) -> None:
        super().__init__(config, output_manager)
        self.fit: RBFit | None = None

    def _fit(self, lengths: tuple[int, ...], probabilities: FloatArray) -> RBFit | None:
        if len(set(lengths)) < 3:
            logger.warning("Fewer than 3 distinct lengths; skipping the decay fit")
            return None
        try:
            return fit_rb_decay(lengths, probabilities)
        except FitFailedError as e:
            logger.warning("RB decay fit failed: %s", e)
            return None

    def compute(self) -> list[Table]:
        rb = self.config.rb.to_rb_config()
        result = run_rb(rb, self.array_model, self.calibration, self.config.seed)
        self.fit = self._fit(result.lengths, result.probabilities)

        means = result.mean_probabilities()
        counts = np.sum(np.isfinite(result.probabilities), axis=1)
        mean_rows = []
        for li, (n, mean, count) in enumerate(zip(result.lengths, means, counts, strict=True)):
            std = float(np.nanstd(result.probabilities[li], ddof=1)) if count > 1 else math.nan
            mean_rows.append(
                {
                    "length": n,
                    "mean_P0": float(mean),
                    "sem": float(std / math.sqrt(count)) if count > 1 else None,
                    "n_valid": int(count),
                    "fit_P0": (
                        float(rb_decay(np.asarray(n, dtype=np.float64), self.fit.d0, self.fit.d))
                        if self.fit
                        else None
                    ),
                }
            )
        fit_meta: dict[str, Any] = (
            {
                "d0": self.fit.d0,
                "d": self.fit.d,
                "fidelity": self.fit.fidelity,
                "d0_err": self.fit.d0_err,
                "d_err": self.fit.d_err,
                "fidelity_err": self.fit.fidelity_err,
            }
            if self.fit
            else {}
        )
        meta = {
            "composite": rb.composite,
            "rabi": rb.rabi,
            "noise_kind": rb.noise_kind.value if rb.noise_kind else None,
            "gamma": rb.gamma,
            "kappa": rb.kappa,
            "average_area": result.average_area,
            "fit": fit_meta,
        }
        if self.fit:
            logger.info(
                "Clifford fidelity %.6f +- %.1e", self.fit.fidelity, self.fit.fidelity_err
            )

        robustness_rows, slopes = composite_robustness()
        return [
            Table(
                name="rb_sequences",
                columns=("length", "sequence", "P0_measured", "P0_true"),
                rows=list(result.rows()),
                meta=meta,
            ),
            Table(
                name="rb_decay",
                columns=("length", "mean_P0", "sem", "n_valid", "fit_P0"),
                rows=mean_rows,
                meta=meta,
                plot=PlotSpec(
                    x="length",
                    y=("mean_P0", "fit_P0"),
                    xlabel="Clifford gates",
                    ylabel="P(|0>)",
                    style="points",
                ),
            ),
            Table(
                name="composite_robustness",
                columns=("epsilon", *slopes),
                rows=robustness_rows,
                meta={"slopes": slopes},
                plot=PlotSpec(
                    x="epsilon",
                    y=tuple(slopes),
                    xlabel="pulse-length error",
                    ylabel="infidelity",
                    logx=True,
                    logy=True,
                ),
            ),
        ]


def run_benchmarking(
    config: ExperimentConfig, output_manager: OutputManager | None = None
) -> list[Table]:
    """Randomized benchmarking tables for the configured campaign."""
    return RBExperiment(config, output_manager).run()
