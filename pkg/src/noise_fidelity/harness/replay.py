"""Replay persisted noise traces against measured fidelities.

A replay directory holds trace files (see ``noise.traces``) named by
realization ID, and optionally a ``replay.json`` manifest recording the master
seed of the run that wrote them. The measurement file is CSV with columns
``realization,F_measured``; an empty ``F_measured`` marks a realization with no
valid shot.
"""

import csv
import json
import logging
import math
from pathlib import Path
from typing import Any

import numpy as np

from ..config import ExperimentConfig
from ..errors import AlignmentError, ConfigError, InvalidArgumentError
from ..measurement import FidelityEnsemble, histogram, kl_divergence
from ..noise import load_trace_dir
from ..outputs import OutputManager, PlotSpec, Table
from ..outputs.csv_writer import format_value
from ..schemas import ExperimentKind
from .base import BaseExperiment
from .runner import EnsembleSpec, run_ensemble_from_traces

logger = logging.getLogger(__name__)

MANIFEST_NAME = "replay.json"
MEASUREMENT_COLUMNS = ["realization", "F_measured"]


def write_measurements(path: Path, ensemble: FidelityEnsemble) -> None:
    """Write an ensemble's measured fidelities in the replay measurement format."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=MEASUREMENT_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in ensemble.measurement_rows():
            writer.writerow({k: format_value(v) for k, v in row.items()})


def read_measurements(path: Path) -> dict[int, float | None]:
    """Read ``realization,F_measured`` rows; missing values map to None."""
    result: dict[int, float | None] = {}
    try:
        with open(path, newline="", encoding="utf-8") as f:
            for row in csv.DictReader(f):
                value = (row.get("F_measured") or "").strip()
                result[int(row["realization"])] = float(value) if value else None
    except (OSError, KeyError, ValueError) as e:
        raise InvalidArgumentError(f"cannot read measurements {path}: {e}") from e
    return result


def write_manifest(directory: Path, payload: dict[str, Any]) -> None:
    (directory / MANIFEST_NAME).write_text(
        json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_manifest(directory: Path) -> dict[str, Any]:
    path = directory / MANIFEST_NAME
    if not path.exists():
        return {}
    return dict(json.loads(path.read_text(encoding="utf-8")))


class ReplayExperiment(BaseExperiment):
    """Re-simulate persisted traces and compare with the measured fidelities."""

    kind = ExperimentKind.REPLAY

    def __init__(
        self,
        config: ExperimentConfig | None = None,
        output_manager: OutputManager | None = None,
    ) -> None:
        super().__init__(config, output_manager)
        self.result: FidelityEnsemble | None = None

    def replay(self, noise_dir: Path, measurements_file: Path) -> FidelityEnsemble:
        """Re-simulate every trace in ``noise_dir``.

        Raises:
            AlignmentError: Trace and measurement realization IDs differ.
        """
        traces = load_trace_dir(noise_dir)
        measured = read_measurements(measurements_file)
        missing_traces = set(measured) - set(traces)
        if missing_traces:
            raise AlignmentError(missing_traces, source=str(noise_dir))
        missing_measurements = set(traces) - set(measured)
        if missing_measurements:
            raise AlignmentError(missing_measurements, source=str(measurements_file))

        manifest = read_manifest(noise_dir)
        seed = int(manifest.get("seed", self.config.seed))
        first = traces[min(traces)]
        window = min(t.duration for t in traces.values())
        pulse = self.schedule(noise_duration=window)
        spec = EnsembleSpec(
            kind=first.kind,
            gamma=float(first.params.gamma) if first.params else 0.0,
            kappa=float(first.params.kappa) if first.params else 0.0,
            fine_dt=first.dt,
            pulse=pulse,
            calib=self.calibration,
            model=self.config.array.build(seed),
            seed=seed,
            noise_mode=self.config.noise.mode,
        )
        ensemble = run_ensemble_from_traces(
            spec, traces, workers=self.config.workers, chunk_size=self.config.chunk_size
        )
        logger.info("Replayed %d realizations from %s", ensemble.n_realizations, noise_dir)
        return ensemble

    def compute(self) -> list[Table]:
        noise_dir = self.config.replay.noise_dir
        measurements_file = self.config.replay.measurements_file
        if noise_dir is None or measurements_file is None:
            raise ConfigError("replay needs both replay.noise_dir and replay.measurements_file")
        ensemble = self.replay(noise_dir, measurements_file)
        self.result = ensemble
        measured = read_measurements(measurements_file)

        observed = np.array(
            [np.nan if measured[i] is None else measured[i] for i in ensemble.realization_ids],
            dtype=np.float64,
        )
        bins = self.config.sweep.bins
        h_obs = histogram(observed, bins)
        h_sim = histogram(ensemble.f_measured, bins)
        divergence = kl_divergence(h_obs, h_sim) if h_obs.total and h_sim.total else math.nan
        summary = ensemble.summary()
        comparison = [
            {
                "realization": int(rid),
                "F_measured": obs,
                "F_replay": sim,
                "F_true_mean": float(mean),
            }
            for rid, obs, sim, mean in zip(
                ensemble.realization_ids,
                observed,
                ensemble.f_measured,
                ensemble.site_mean(),
                strict=True,
            )
        ]
        hist_rows = [
            {
                "bin_lo": float(h_obs.edges[k]),
                "bin_hi": float(h_obs.edges[k + 1]),
                "measured_count": int(h_obs.counts[k]),
                "replay_count": int(h_sim.counts[k]),
            }
            for k in range(bins)
        ]
        return [
            Table(
                name="replay_comparison",
                columns=("realization", "F_measured", "F_replay", "F_true_mean"),
                rows=comparison,
                meta={"kl_measured_vs_replay": divergence, "summary": summary},
            ),
            Table(
                name="replay_histogram",
                columns=("bin_lo", "bin_hi", "measured_count", "replay_count"),
                rows=hist_rows,
                meta={"kl_measured_vs_replay": divergence},
                plot=PlotSpec(
                    x="bin_lo",
                    y=("measured_count", "replay_count"),
                    xlabel="measured fidelity",
                    ylabel="count",
                    style="step",
                ),
            ),
        ]


def replay_experiment(
    noise_dir: Path,
    measurements_file: Path,
    config: ExperimentConfig | None = None,
) -> FidelityEnsemble:
    """Load traces and measured fidelities, re-simulate, and return the ensemble.

    Args:
        noise_dir: Directory of trace files.
        measurements_file: CSV with ``realization,F_measured``.
        config: Pulse, array and seed settings of the original run.

    Raises:
        AlignmentError: Realization IDs differ between the two inputs.
    """
    return ReplayExperiment(config).replay(Path(noise_dir), Path(measurements_file))
