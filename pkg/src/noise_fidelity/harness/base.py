"""Base experiment class with output management."""

import csv
import logging
from abc import ABC, abstractmethod
from functools import cached_property
from pathlib import Path
from typing import Any, ClassVar

from ..config import ExperimentConfig
from ..dynamics import NoiseOperatorSpec, QubitState
from ..errors import ConfigError
from ..measurement import FidelityEnsemble
from ..outputs import OutputManager, Table
from ..schemas import AmplitudeCalibration, ArrayModel, ExperimentKind, NoiseKind, PulseSchedule
from .runner import EnsembleSpec, run_ensemble

logger = logging.getLogger(__name__)


def read_experiment_curve(path: Path) -> dict[float, float]:
    """Read an experimental curve CSV with columns ``key,F_measured``.

    ``key`` is the swept quantity (gamma or t); empty F_measured fields are skipped.
    """
    curve: dict[float, float] = {}
    try:
        with open(path, newline="", encoding="utf-8") as f:
            for row in csv.DictReader(f):
                value = (row.get("F_measured") or "").strip()
                if value:
                    curve[float(row["key"])] = float(value)
    except (OSError, KeyError, ValueError) as e:
        raise ConfigError(f"cannot read experiment curve {path}: {e}") from e
    return curve


def lookup(curve: dict[float, float], key: float, rel: float = 1e-9) -> float | None:
    """Value of ``curve`` at ``key`` up to relative tolerance, or None."""
    for k, v in curve.items():
        if abs(k - key) <= rel * max(abs(k), abs(key), 1e-300):
            return v
    return None


class BaseExperiment(ABC):
    """Base class for all experiment families.

    Experiments compute result tables from an ExperimentConfig and write them,
    with config.json and per-table sidecars, via the OutputManager.
    """

    kind: ClassVar[ExperimentKind]

    def __init__(
        self,
        config: ExperimentConfig | None = None,
        output_manager: OutputManager | None = None,
    ) -> None:
        """Initialize base experiment.

        Args:
            config: Experiment configuration.
            output_manager: Optional OutputManager for testing.
        """
        self.config = config or ExperimentConfig()

        # Allow injecting OutputManager for testing
        self._output_manager = output_manager

    @property
    def provenance(self) -> dict[str, Any]:
        return {
            "config_hash": self.config.config_hash(),
            "seed": self.config.seed,
            "experiment": self.kind.value,
        }

    @property
    def output_manager(self) -> OutputManager:
        """Lazy-initialize output manager."""
        if self._output_manager is None:
            self._output_manager = OutputManager(
                run_dir=Path(self.config.output.output_dir) / self.kind.value,
                provenance=self.provenance,
                plots=self.config.output.plots,
            )
        return self._output_manager

    @cached_property
    def calibration(self) -> AmplitudeCalibration:
        return self.config.pulse.calibration()

    @cached_property
    def array_model(self) -> ArrayModel:
        return self.config.array.build(self.config.seed)

    @cached_property
    def s0(self) -> float:
        """Noise-operator expectation in the initial state |0>."""
        return NoiseOperatorSpec().s0(QubitState.ground())

    def schedule(self, noise_duration: float | None = None) -> PulseSchedule:
        return self.config.pulse.schedule(self.calibration, noise_duration)

    def ensemble_spec(
        self,
        kind: NoiseKind,
        gamma: float,
        pulse: PulseSchedule,
        measure: bool = True,
        model: ArrayModel | None = None,
    ) -> EnsembleSpec:
        noise = self.config.noise
        return EnsembleSpec(
            kind=kind,
            gamma=gamma,
            kappa=noise.kappa,
            fine_dt=noise.fine_dt,
            pulse=pulse,
            calib=self.calibration,
            model=model or self.array_model,
            seed=self.config.seed,
            noise_mode=noise.mode,
            measure=measure,
        )

    def ensemble(
        self,
        spec: EnsembleSpec,
        n_realizations: int | None = None,
    ) -> FidelityEnsemble:
        """Run an ensemble with the configured worker count and chunking."""
        return run_ensemble(
            spec,
            n_realizations or self.config.sweep.realizations,
            workers=self.config.workers,
            chunk_size=self.config.chunk_size,
        )

    def experiment_curve(self) -> dict[float, float]:
        path = self.config.sweep.experiment_file
        return {} if path is None else read_experiment_curve(path)

    @abstractmethod
    def compute(self) -> list[Table]:
        """Compute the result tables."""

    def run(self) -> list[Table]:
        """Compute and write all result tables."""
        logger.info("Starting %s (seed %d)", self.kind.value, self.config.seed)
        tables = self.compute()
        manager = self.output_manager
        manager.write_config(self.config.resolved())
        for table in tables:
            manager.write_table(table)
        manager.flush()
        manager.close()
        logger.info("Finished %s: %d tables", self.kind.value, len(tables))
        return tables
