"""Timestep robustness: one set of fine traces integrated at several timesteps."""

import logging
import math

from ..analytics import mean_fidelity
from ..config import ExperimentConfig
from ..outputs import OutputManager, PlotSpec, Table
from ..schemas import ArrayModel, ExperimentKind, MomentSpec
from .base import BaseExperiment

logger = logging.getLogger(__name__)

COLUMNS = ("dt", "n_steps", "mean", "se", "analytic_mean", "deviation_se")


class ConvergenceExperiment(BaseExperiment):
    """Mean true fidelity for each integration timestep.

    Every timestep reuses the same fine traces (same seeds), summed onto its
    own segment grid, so the differences isolate the integrator. A single site
    at the nominal Rabi frequency is simulated.
    """

    kind = ExperimentKind.CONVERGENCE

    def compute(self) -> list[Table]:
        noise = self.config.noise
        sweep = self.config.sweep
        array = self.config.array
        model = ArrayModel.homogeneous(1, array.n_meas, array.p_c, array.p01, array.p10)
        moments = MomentSpec(kind=noise.kind, gamma=noise.gamma, kappa=noise.kappa, s0=self.s0)

        rows = []
        t = 0.0
        for dt in sweep.convergence_dts:
            pulse = self.config.pulse.schedule(self.calibration, segment_dt=dt)
            t = pulse.noise_duration
            spec = self.ensemble_spec(noise.kind, noise.gamma, pulse, measure=False, model=model)
            ensemble = self.ensemble(spec, sweep.convergence_realizations)
            summary = ensemble.summary()
            analytic = mean_fidelity(moments, t)
            se = summary["true_se"]
            rows.append(
                {
                    "dt": dt,
                    "n_steps": len(pulse.segments),
                    "mean": summary["true_mean"],
                    "se": se,
                    "analytic_mean": analytic,
                    "deviation_se": (summary["true_mean"] - analytic) / se if se > 0 else math.nan,
                }
            )
            logger.info("dt=%g: mean %.6f +- %.1e", dt, summary["true_mean"], se)
        return [
            Table(
                name="convergence",
                columns=COLUMNS,
                rows=rows,
                meta={
                    "kind": noise.kind.value,
                    "gamma": noise.gamma,
                    "kappa": noise.kappa,
                    "t": t,
                    "realizations": sweep.convergence_realizations,
                },
                plot=PlotSpec(
                    x="dt",
                    y=("mean", "analytic_mean"),
                    xlabel="dt (s)",
                    ylabel="mean fidelity",
                    style="points",
                    logx=True,
                ),
            )
        ]


def run_convergence(
    config: ExperimentConfig, output_manager: OutputManager | None = None
) -> Table:
    """Mean fidelity against integration timestep."""
    return ConvergenceExperiment(config, output_manager).run()[0]
