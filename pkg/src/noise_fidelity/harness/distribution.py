"""Distributions of the measured fidelity at selected noise durations."""

import logging

import numpy as np

from ..config import ExperimentConfig
from ..measurement import FidelityEnsemble, histogram, kde, kl_divergence
from ..noise import trace_filename, write_trace
from ..outputs import OutputManager, PlotSpec, Table
from ..schemas import ExperimentKind
from .base import BaseExperiment
from .replay import read_measurements, write_manifest, write_measurements
from .runner import EnsembleSpec

logger = logging.getLogger(__name__)


def _label(kind: str, t: float) -> str:
    return f"{kind}_{t * 1e6:g}us"


class DistributionExperiment(BaseExperiment):
    """Histogram and KDE of F_m per noise kind and duration.

    With ``output.save_traces`` the traces and measured fidelities of every
    point are persisted under ``traces/<label>/`` in the replay format. A
    configured ``replay.measurements_file`` is overlaid on every histogram.
    """

    kind = ExperimentKind.DISTRIBUTION

    def _persist(self, label: str, spec: EnsembleSpec, ensemble: FidelityEnsemble) -> None:
        if spec.pulse.n_noise_steps == 0:
            logger.info("No noise window at %s; no traces to save", label)
            return
        directory = self.output_manager.subdir(f"traces/{label}")
        for rid in ensemble.realization_ids:
            trace = spec.trace(int(rid))
            assert trace is not None
            write_trace(trace, directory / trace_filename(int(rid)), realization=int(rid))
        write_measurements(directory / "measurements.csv", ensemble)
        write_manifest(directory, {"seed": spec.seed, **spec.metadata()})
        logger.info("Saved %d traces to %s", ensemble.n_realizations, directory)

    def _external(self) -> np.ndarray | None:
        path = self.config.replay.measurements_file
        if path is None:
            return None
        values = [np.nan if v is None else v for v in read_measurements(path).values()]
        return np.asarray(values, dtype=np.float64)

    def compute(self) -> list[Table]:
        sweep = self.config.sweep
        external = self._external()
        tables: list[Table] = []
        for kind in sweep.kinds:
            gamma = sweep.gamma_for(kind)
            for t in sweep.distribution_times:
                label = _label(kind.value, t)
                spec = self.ensemble_spec(kind, gamma, self.schedule(t))
                ensemble = self.ensemble(spec)
                if self.config.output.save_traces:
                    self._persist(label, spec, ensemble)
                tables.extend(self._tables(label, ensemble, external))
        return tables

    def _tables(
        self, label: str, ensemble: FidelityEnsemble, external: np.ndarray | None
    ) -> list[Table]:
        sweep = self.config.sweep
        meta = {**ensemble.metadata, "summary": ensemble.summary()}
        hist = histogram(ensemble.f_measured, sweep.bins)
        ext_hist = histogram(external, sweep.bins) if external is not None else None
        if ext_hist is not None and ext_hist.total and hist.total:
            meta["kl_experiment_vs_sim"] = kl_divergence(ext_hist, hist)
        hist_rows = [
            {
                "bin_lo": float(hist.edges[k]),
                "bin_hi": float(hist.edges[k + 1]),
                "center": float(hist.centers[k]),
                "count": int(hist.counts[k]),
                "experiment_count": int(ext_hist.counts[k]) if ext_hist is not None else None,
            }
            for k in range(sweep.bins)
        ]
        tables = [
            Table(
                name=f"distribution_{label}_hist",
                columns=("bin_lo", "bin_hi", "center", "count", "experiment_count"),
                rows=hist_rows,
                meta=meta,
                plot=PlotSpec(
                    x="center",
                    y=("count", "experiment_count") if ext_hist is not None else ("count",),
                    xlabel="measured fidelity",
                    ylabel="count",
                    style="step",
                    title=label,
                ),
            ),
            Table(
                name=f"ensemble_{label}",
                columns=("realization", "site", "F_true"),
                rows=list(ensemble.long_rows()),
                meta=meta,
            ),
        ]
        finite = ensemble.f_measured[np.isfinite(ensemble.f_measured)]
        if finite.size >= 2:
            density = kde(finite, grid_points=sweep.kde_points)
            tables.append(
                Table(
                    name=f"distribution_{label}_kde",
                    columns=("F", "density"),
                    rows=[
                        {"F": float(f), "density": float(d)}
                        for f, d in zip(density.grid, density.density, strict=True)
                    ],
                    meta={**meta, "bandwidth": density.bandwidth},
                    plot=PlotSpec(x="F", y=("density",), xlabel="measured fidelity", title=label),
                )
            )
        else:
            logger.warning("Skipping KDE for %s: fewer than 2 measured fidelities", label)
        return tables


def run_distribution(
    config: ExperimentConfig, output_manager: OutputManager | None = None
) -> list[Table]:
    """Histogram and KDE tables for every configured kind and distribution time."""
    return DistributionExperiment(config, output_manager).run()
