"""SPAM parameter estimation from zero-noise measured-fidelity distributions."""

import logging
from pathlib import Path

import numpy as np
import numpy.typing as npt

from ..config import ExperimentConfig
from ..errors import ConfigError
from ..measurement import ReadoutSimulator, SpamFit, fit_spam, histogram, kl_divergence
from ..outputs import OutputManager, PlotSpec, Table
from ..schemas import ExperimentKind
from ..seeding import AUX_STREAM, derive_seed
from .base import BaseExperiment
from .replay import read_measurements

logger = logging.getLogger(__name__)

FloatArray = npt.NDArray[np.float64]

CONDITION_NAMES = ("plain", "flipped")


def read_condition(path: Path) -> FloatArray:
    """Measured fidelities of one condition file; missing values become NaN."""
    values = [np.nan if v is None else v for v in read_measurements(path).values()]
    return np.asarray(values, dtype=np.float64)


class SpamFitExperiment(BaseExperiment):
    """Fit (p01, p10) to zero-noise data.

    Two conditions pin both flip probabilities: the plain pulse (F near 1) and
    the same pulse followed by a pi flip (F near 0). Without experiment files
    the data are simulated at the configured p01/p10 from an independent stream.
    """

    kind = ExperimentKind.SPAM_FIT

    def conditions(self) -> list[FloatArray]:
        spec = self.ensemble_spec(
            self.config.noise.kind, 0.0, self.schedule(noise_duration=0.0), measure=False
        )
        f_true = self.ensemble(spec).f_true
        return [f_true, 1.0 - f_true]

    def experimental(self, conditions: list[FloatArray]) -> tuple[list[FloatArray], bool]:
        """Experimental samples per condition and whether they were simulated."""
        files = self.config.spam.experiment_files
        if len(files) > len(CONDITION_NAMES):
            raise ConfigError(f"at most {len(CONDITION_NAMES)} SPAM experiment files are allowed")
        if files:
            return [read_condition(path) for path in files], False
        array = self.config.array
        planted = ReadoutSimulator(
            conditions, array.n_meas, array.p_c, derive_seed(self.config.seed, AUX_STREAM)
        )
        samples = planted(np.array([array.p01]), np.array([array.p10]))
        return [s[0] for s in samples], True

    def fit(self) -> tuple[SpamFit, list[FloatArray], list[FloatArray], bool]:
        spam = self.config.spam
        array = self.config.array
        conditions = self.conditions()
        experimental, synthetic = self.experimental(conditions)
        conditions = conditions[: len(experimental)]
        simulator = ReadoutSimulator(conditions, array.n_meas, array.p_c, self.config.seed)
        result = fit_spam(
            experimental,
            simulator,
            bins=spam.bins,
            bounds=(spam.p01_bounds, spam.p10_bounds),
            coarse_step=spam.coarse_step,
            fine_step=spam.fine_step,
        )
        best = [s[0] for s in simulator(np.array([result.p01]), np.array([result.p10]))]
        return result, experimental, best, synthetic

    def compute(self) -> list[Table]:
        result, experimental, best, synthetic = self.fit()
        array = self.config.array
        bins = self.config.spam.bins
        row = {
            "p01": result.p01,
            "p10": result.p10,
            "divergence": result.divergence,
            "n_evaluations": result.n_evaluations,
            "planted_p01": array.p01 if synthetic else None,
            "planted_p10": array.p10 if synthetic else None,
        }
        hist_rows = []
        per_condition = {}
        for name, data, sim in zip(CONDITION_NAMES, experimental, best, strict=False):
            h_exp = histogram(data, bins)
            h_sim = histogram(sim, bins)
            per_condition[name] = kl_divergence(h_exp, h_sim)
            hist_rows.extend(
                {
                    "condition": name,
                    "bin_lo": float(h_exp.edges[k]),
                    "bin_hi": float(h_exp.edges[k + 1]),
                    "experiment_count": int(h_exp.counts[k]),
                    "fit_count": int(h_sim.counts[k]),
                }
                for k in range(bins)
            )
        meta = {"synthetic": synthetic, "kl_per_condition": per_condition}
        return [
            Table(
                name="spam_fit",
                columns=tuple(row),
                rows=[row],
                meta=meta,
            ),
            Table(
                name="spam_fit_hist",
                columns=("condition", "bin_lo", "bin_hi", "experiment_count", "fit_count"),
                rows=hist_rows,
                meta=meta,
                plot=PlotSpec(
                    x="bin_lo",
                    y=("experiment_count", "fit_count"),
                    xlabel="measured fidelity",
                    ylabel="count",
                    style="points",
                ),
            ),
        ]


def run_spam_fit(
    config: ExperimentConfig, output_manager: OutputManager | None = None
) -> SpamFit:
    """Fit the SPAM parameters and write the fit tables."""
    experiment = SpamFitExperiment(config, output_manager)
    table = experiment.run()[0]
    row = table.rows[0]
    return SpamFit(
        p01=row["p01"],
        p10=row["p10"],
        divergence=row["divergence"],
        n_evaluations=row["n_evaluations"],
    )
