"""Power spectral densities of the generated noise, with sample realizations."""

import logging
import math
from typing import Any

import numpy as np

from ..config import ExperimentConfig
from ..errors import FitFailedError
from ..noise import NoiseTrace, fit_ou_knee, generate_trace, psd, spectral_slope
from ..outputs import OutputManager, PlotSpec, Table
from ..schemas import ExperimentKind, NoiseKind, NoiseParams
from ..seeding import AUX_STREAM, derive_seed
from .base import BaseExperiment

logger = logging.getLogger(__name__)

EXPECTED_SLOPES = {NoiseKind.WN: 0.0, NoiseKind.BM: -2.0}


class PSDExperiment(BaseExperiment):
    """Welch PSD of dX/dt per noise kind, with the slope or knee it should show.

    Tables ``psd_<kind>`` come first in kind order, followed by one
    ``noise_examples_<kind>`` table per kind holding the paths X(t) of the first
    ``psd.n_examples`` traces, thinned to at most ``psd.example_points`` times.
    """

    kind = ExperimentKind.PSD

    def _shape(self, kind: NoiseKind, spectrum: Any, kappa: float) -> dict[str, Any]:
        cfg = self.config.psd
        if kind is NoiseKind.OU:
            try:
                knee = fit_ou_knee(spectrum, cfg.f_min, cfg.f_max)
            except FitFailedError as e:
                logger.warning("OU knee fit failed: %s", e)
                knee = None
            return {"knee_hz": knee, "expected_knee_hz": kappa / (2 * math.pi)}
        return {
            "slope": spectral_slope(spectrum, cfg.f_min, cfg.f_max),
            "expected_slope": EXPECTED_SLOPES[kind],
        }

    def _traces(self, kind: NoiseKind, gamma: float, kappa: float) -> list[NoiseTrace]:
        cfg = self.config.psd
        return [
            generate_trace(
                NoiseParams(
                    kind=kind,
                    gamma=gamma,
                    kappa=kappa,
                    fine_dt=self.config.noise.fine_dt,
                    duration=cfg.duration,
                    seed=derive_seed(self.config.seed, i, AUX_STREAM),
                )
            )
            for i in range(max(cfg.n_traces, cfg.n_examples))
        ]

    def _spectrum_table(
        self, kind: NoiseKind, gamma: float, kappa: float, traces: list[NoiseTrace]
    ) -> Table:
        cfg = self.config.psd
        spectrum = psd(traces[: cfg.n_traces], cfg.nperseg)
        meta = {
            "kind": kind.value,
            "gamma": gamma,
            "kappa": kappa,
            "n_traces": spectrum.n_traces,
            "nyquist_hz": 1.0 / (2.0 * self.config.noise.fine_dt),
            "band_hz": [cfg.f_min, cfg.f_max],
            **self._shape(kind, spectrum, kappa),
        }
        logger.info("PSD %s: %s", kind.value, meta)
        return Table(
            name=f"psd_{kind.value}",
            columns=("frequency", "power"),
            rows=[
                {"frequency": float(f), "power": float(p)}
                for f, p in zip(spectrum.frequencies, spectrum.power, strict=True)
            ],
            meta=meta,
            plot=PlotSpec(
                x="frequency",
                y=("power",),
                xlabel="f (Hz)",
                ylabel="PSD",
                title=kind.value,
                logx=True,
                logy=True,
            ),
        )

    def _examples_table(
        self, kind: NoiseKind, gamma: float, kappa: float, traces: list[NoiseTrace]
    ) -> Table:
        examples = traces[: self.config.psd.n_examples]
        n_steps = examples[0].n_steps
        n_points = min(self.config.psd.example_points, n_steps + 1)
        index = np.unique(np.rint(np.linspace(0, n_steps, n_points)).astype(np.int64))
        paths = [trace.path()[index] for trace in examples]
        labels = tuple(f"X_{i}" for i in range(len(examples)))
        dt = examples[0].dt
        rows = []
        for j, k in enumerate(index):
            row = {"t": float(k * dt)}
            row.update({label: float(p[j]) for label, p in zip(labels, paths, strict=True)})
            rows.append(row)
        return Table(
            name=f"noise_examples_{kind.value}",
            columns=("t", *labels),
            rows=rows,
            meta={
                "kind": kind.value,
                "gamma": gamma,
                "kappa": kappa,
                "fine_dt": dt,
                "seeds": [trace.seed for trace in examples],
            },
            plot=PlotSpec(
                x="t", y=labels, xlabel="t (s)", ylabel="X (rad)", title=f"{kind.value} noise"
            ),
        )

    def compute(self) -> list[Table]:
        spectra = []
        examples = []
        for kind in self.config.sweep.kinds:
            gamma = self.config.sweep.gamma_for(kind)
            kappa = self.config.psd.ou_kappa if kind is NoiseKind.OU else 0.0
            traces = self._traces(kind, gamma, kappa)
            spectra.append(self._spectrum_table(kind, gamma, kappa, traces))
            if self.config.psd.n_examples:
                examples.append(self._examples_table(kind, gamma, kappa, traces))
        return spectra + examples


def run_psd(config: ExperimentConfig, output_manager: OutputManager | None = None) -> list[Table]:
    """PSD tables for every configured noise kind, then the sample-path tables."""
    return PSDExperiment(config, output_manager).run()
