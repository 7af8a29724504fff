"""Experiment orchestration: ensembles, sweeps, benchmarking, SPAM fits and replay."""

from ..config import ExperimentConfig
from ..outputs import OutputManager, Table
from ..schemas import ExperimentKind
from .base import BaseExperiment
from .benchmarking import RBExperiment, composite_robustness, run_benchmarking
from .convergence import ConvergenceExperiment, run_convergence
from .distribution import DistributionExperiment, run_distribution
from .psd import PSDExperiment, run_psd
from .replay import ReplayExperiment, read_measurements, replay_experiment, write_measurements
from .runner import EnsembleSpec, run_ensemble, run_ensemble_from_traces
from .spam import SpamFitExperiment, run_spam_fit
from .sweeps import (
    GammaSweepExperiment,
    TimeSweepExperiment,
    VarianceSweepExperiment,
    run_gamma_sweep,
    run_time_sweep,
    run_variance_sweep,
)

EXPERIMENTS: dict[ExperimentKind, type[BaseExperiment]] = {
    ExperimentKind.GAMMA_SWEEP: GammaSweepExperiment,
    ExperimentKind.TIME_SWEEP: TimeSweepExperiment,
    ExperimentKind.VARIANCE_SWEEP: VarianceSweepExperiment,
    ExperimentKind.DISTRIBUTION: DistributionExperiment,
    ExperimentKind.CONVERGENCE: ConvergenceExperiment,
    ExperimentKind.PSD: PSDExperiment,
    ExperimentKind.RB: RBExperiment,
    ExperimentKind.SPAM_FIT: SpamFitExperiment,
    ExperimentKind.REPLAY: ReplayExperiment,
}


def run_experiment(
    config: ExperimentConfig, output_manager: OutputManager | None = None
) -> list[Table]:
    """Run the experiment named by ``config.experiment``."""
    return EXPERIMENTS[config.experiment](config, output_manager).run()


__all__ = [
    "EXPERIMENTS",
    "BaseExperiment",
    "ConvergenceExperiment",
    "DistributionExperiment",
    "EnsembleSpec",
    "GammaSweepExperiment",
    "PSDExperiment",
    "RBExperiment",
    "ReplayExperiment",
    "SpamFitExperiment",
    "TimeSweepExperiment",
    "VarianceSweepExperiment",
    "composite_robustness",
    "read_measurements",
    "replay_experiment",
    "run_benchmarking",
    "run_convergence",
    "run_distribution",
    "run_ensemble",
    "run_ensemble_from_traces",
    "run_experiment",
    "run_gamma_sweep",
    "run_psd",
    "run_spam_fit",
    "run_time_sweep",
    "run_variance_sweep",
    "write_measurements",
]
