"""Mean and spread of the fidelity against noise strength and duration."""

import logging
import math
from typing import Any

import numpy as np
import numpy.typing as npt

from ..analytics import sample_moment_bands, var_fidelity
from ..config import ExperimentConfig
from ..measurement import FidelityEnsemble
from ..outputs import OutputManager, PlotSpec, Table
from ..schemas import ArrayModel, ExperimentKind, MomentSpec
from .base import BaseExperiment, lookup

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

MEAN_COLUMNS = (
    "gamma",
    "t",
    "analytic_mean",
    "analytic_se",
    "analytic_measured_mean",
    "sim_true_mean",
    "sim_true_se",
    "sim_measured_mean",
    "sim_measured_se",
    "n_missing",
    "experiment",
)

VARIANCE_COLUMNS = (
    "t",
    "gamma",
    "analytic_std",
    "sim_std",
    "sim_std_se",
    "sim_measured_std",
)


def measured_expectation(f: float, model: ArrayModel) -> float:
    """E[F_m] for true fidelity ``f`` under the SPAM flips."""
    return f * (1.0 - model.p10) + (1.0 - f) * model.p01


def std_with_error(values: FloatArray) -> tuple[float, float]:
    """Sample standard deviation and its standard error from the fourth moment."""
    x = np.asarray(values, dtype=np.float64)
    x = x[np.isfinite(x)]
    n = x.size
    if n < 2:
        return 0.0, math.nan
    s2 = float(x.var(ddof=1))
    m4 = float(np.mean((x - x.mean()) ** 4))
    var_se = math.sqrt(max(m4 - s2 * s2 * (n - 3) / (n - 1), 0.0) / n)
    std = math.sqrt(s2)
    return std, (var_se / (2.0 * std) if std > 0 else 0.0)


def mean_row(
    ensemble: FidelityEnsemble,
    spec: MomentSpec,
    t: float,
    model: ArrayModel,
    experiment: float | None = None,
) -> dict[str, Any]:
    """Analytic and simulated mean fidelity at one sweep point."""
    summary = ensemble.summary()
    mean, se = sample_moment_bands(spec, t, max(ensemble.n_realizations, 2))
    return {
        "gamma": spec.gamma,
        "t": t,
        "analytic_mean": mean,
        "analytic_se": se,
        "analytic_measured_mean": measured_expectation(mean, model),
        "sim_true_mean": summary["true_mean"],
        "sim_true_se": summary["true_se"],
        "sim_measured_mean": summary["measured_mean"],
        "sim_measured_se": summary["measured_se"],
        "n_missing": summary["n_missing"],
        "experiment": experiment,
    }


class GammaSweepExperiment(BaseExperiment):
    """Mean fidelity against noise strength at a fixed noise duration."""

    kind = ExperimentKind.GAMMA_SWEEP

    def compute(self) -> list[Table]:
        noise = self.config.noise
        pulse = self.schedule()
        t = pulse.noise_duration
        curve = self.experiment_curve()
        rows = []
        for gamma in self.config.sweep.gammas:
            ensemble = self.ensemble(self.ensemble_spec(noise.kind, gamma, pulse))
            spec = MomentSpec(kind=noise.kind, gamma=gamma, kappa=noise.kappa, s0=self.s0)
            rows.append(mean_row(ensemble, spec, t, self.array_model, lookup(curve, gamma)))
            logger.info("gamma=%g: sim mean %.6f", gamma, rows[-1]["sim_true_mean"])
        return [
            Table(
                name="gamma_sweep",
                columns=MEAN_COLUMNS,
                rows=rows,
                meta={"kind": noise.kind.value, "kappa": noise.kappa, "t": t},
                plot=PlotSpec(
                    x="gamma",
                    y=("analytic_mean", "sim_true_mean", "sim_measured_mean", "experiment"),
                    xlabel="gamma",
                    ylabel="fidelity",
                    style="points",
                ),
            )
        ]


class TimeSweepExperiment(BaseExperiment):
    """Mean fidelity against noise duration, one table per noise kind."""

    kind = ExperimentKind.TIME_SWEEP

    def compute(self) -> list[Table]:
        sweep = self.config.sweep
        curve = self.experiment_curve()
        tables = []
        for kind in sweep.kinds:
            gamma = sweep.gamma_for(kind)
            spec = MomentSpec(kind=kind, gamma=gamma, kappa=self.config.noise.kappa, s0=self.s0)
            rows = []
            for t in sweep.times:
                ensemble = self.ensemble(self.ensemble_spec(kind, gamma, self.schedule(t)))
                rows.append(mean_row(ensemble, spec, t, self.array_model, lookup(curve, t)))
            tables.append(
                Table(
                    name=f"time_sweep_{kind.value}",
                    columns=MEAN_COLUMNS,
                    rows=rows,
                    meta={"kind": kind.value, "gamma": gamma, "kappa": spec.kappa},
                    plot=PlotSpec(
                        x="t",
                        y=("analytic_mean", "sim_true_mean", "sim_measured_mean"),
                        xlabel="t (s)",
                        ylabel="fidelity",
                        title=kind.value,
                    ),
                )
            )
        return tables


class VarianceSweepExperiment(BaseExperiment):
    """Fidelity standard deviation against noise duration."""

    kind = ExperimentKind.VARIANCE_SWEEP

    def compute(self) -> list[Table]:
        sweep = self.config.sweep
        tables = []
        for kind in sweep.kinds:
            gamma = sweep.gamma_for(kind)
            spec = MomentSpec(kind=kind, gamma=gamma, kappa=self.config.noise.kappa, s0=self.s0)
            rows = []
            for t in sweep.times:
                ensemble = self.ensemble(self.ensemble_spec(kind, gamma, self.schedule(t)))
                std, std_se = std_with_error(ensemble.site_mean())
                measured_std, _ = std_with_error(ensemble.f_measured)
                rows.append(
                    {
                        "t": t,
                        "gamma": gamma,
                        "analytic_std": math.sqrt(var_fidelity(spec, t)),
                        "sim_std": std,
                        "sim_std_se": std_se,
                        "sim_measured_std": measured_std,
                    }
                )
            tables.append(
                Table(
                    name=f"variance_sweep_{kind.value}",
                    columns=VARIANCE_COLUMNS,
                    rows=rows,
                    meta={"kind": kind.value, "gamma": gamma, "kappa": spec.kappa},
                    plot=PlotSpec(
                        x="t",
                        y=("analytic_std", "sim_std"),
                        xlabel="t (s)",
                        ylabel="fidelity std",
                        title=kind.value,
                    ),
                )
            )
        return tables


def run_gamma_sweep(
    config: ExperimentConfig, output_manager: OutputManager | None = None
) -> Table:
    """Mean fidelity for each configured gamma."""
    return GammaSweepExperiment(config, output_manager).run()[0]


def run_time_sweep(
    config: ExperimentConfig, output_manager: OutputManager | None = None
) -> list[Table]:
    """Mean fidelity over the time grid for each configured noise kind."""
    return TimeSweepExperiment(config, output_manager).run()


def run_variance_sweep(
    config: ExperimentConfig, output_manager: OutputManager | None = None
) -> list[Table]:
    """Fidelity standard deviation over the time grid for each configured noise kind."""
    return VarianceSweepExperiment(config, output_manager).run()
