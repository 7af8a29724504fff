"""Monte-Carlo acceptance checks against the closed-form moments.

These run large ensembles and are marked slow: ``pytest -m slow``.
"""

import math

import numpy as np
import pytest

from noise_fidelity.analytics import mean_fidelity, var_fidelity
from noise_fidelity.benchmarking import fit_rb_decay, rb_decay
from noise_fidelity.config import (
    ArrayConfig,
    ExperimentConfig,
    NoiseConfig,
    OutputConfig,
    PSDConfig,
    PulseConfig,
    SweepConfig,
)
from noise_fidelity.harness import GammaSweepExperiment, run_ensemble, run_psd
from noise_fidelity.harness.sweeps import std_with_error
from noise_fidelity.measurement import ReadoutSimulator, fit_spam, measure_rows
from noise_fidelity.schemas import ArrayModel, MomentSpec, NoiseKind
from noise_fidelity.seeding import make_rng

pytestmark = pytest.mark.slow

# Agreement band in standard errors for fixed-seed Monte-Carlo checks.
N_SE = 3.0
N_REALIZATIONS = 10_000
N_CONVERGENCE = 2000
WN_TIMES = [20e-6 * k for k in range(1, 11)]
BM_GAMMA = 4.22e5  # s^-3/2, mean fidelity near 0.75 at 180 us


def _within_se(values: np.ndarray, expected: float) -> None:
    se = values.std(ddof=1) / math.sqrt(values.size)
    assert abs(values.mean() - expected) <= N_SE * se


class TestClosedFormMeans:
    @pytest.mark.parametrize("kappa", [1e3, 5e3, 1e4])
    def test_ornstein_uhlenbeck(self, make_spec, kappa):
        """Test the OU mean at 200 us for several damping rates."""
        spec = make_spec(NoiseKind.OU, 6.0, kappa=kappa)
        ensemble = run_ensemble(spec, N_REALIZATIONS, chunk_size=1000)
        expected = mean_fidelity(MomentSpec(kind=NoiseKind.OU, gamma=6.0, kappa=kappa), 200e-6)
        if kappa == 5e3:
            assert expected == pytest.approx(0.996897, abs=1e-6)
        _within_se(ensemble.site_mean(), expected)

    def test_brownian_motion(self, make_spec):
        """Test the BM mean at 180 us."""
        spec = make_spec(NoiseKind.BM, BM_GAMMA, t=180e-6)
        ensemble = run_ensemble(spec, N_REALIZATIONS, chunk_size=1000)
        expected = mean_fidelity(MomentSpec(kind=NoiseKind.BM, gamma=BM_GAMMA), 180e-6)
        assert expected == pytest.approx(0.75, abs=0.01)
        _within_se(ensemble.site_mean(), expected)

    def test_brownian_cubic_shape(self, make_spec):
        """Test that -log(2F - 1) grows as t^3 for BM."""
        times = np.array([60e-6, 120e-6, 180e-6])
        exponents = []
        for t in times:
            ensemble = run_ensemble(make_spec(NoiseKind.BM, BM_GAMMA, t=t), 4000, chunk_size=1000)
            exponents.append(-math.log(2.0 * ensemble.site_mean().mean() - 1.0))
        slope = np.polyfit(np.log(times), np.log(exponents), 1)[0]
        assert slope == pytest.approx(3.0, abs=0.2)


class TestWhiteNoiseLaws:
    def test_closed_form_values(self):
        """Test the WN mean and spread at 200 us."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        assert mean_fidelity(spec, 200e-6) == pytest.approx(0.992852, abs=1e-6)
        assert math.sqrt(var_fidelity(spec, 200e-6)) == pytest.approx(0.01004, abs=1e-5)

    @pytest.mark.parametrize("t", WN_TIMES, ids=[f"{round(t * 1e6)}us" for t in WN_TIMES])
    def test_mean_and_spread(self, make_spec, t):
        """Test the WN mean and standard deviation on the 20-200 us grid."""
        ensemble = run_ensemble(make_spec(NoiseKind.WN, 6.0, t=t), N_REALIZATIONS, chunk_size=1000)
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        values = ensemble.site_mean()
        _within_se(values, mean_fidelity(spec, t))
        std, std_se = std_with_error(values)
        assert abs(std - math.sqrt(var_fidelity(spec, t))) <= N_SE * std_se


class TestTrajectoryOracle:
    @pytest.mark.parametrize(
        "kind, gamma, kappa",
        [(NoiseKind.WN, 6.0, 0.0), (NoiseKind.OU, 6.0, 5e3), (NoiseKind.BM, BM_GAMMA, 0.0)],
    )
    def test_commuting_noise(self, make_spec, kind, gamma, kappa):
        """Test every trajectory against cos^2 of its displacement."""
        ensemble = run_ensemble(make_spec(kind, gamma, kappa=kappa), 1000, chunk_size=500)
        oracle = np.cos(ensemble.displacements) ** 2
        assert np.max(np.abs(ensemble.f_true[:, 0] - oracle)) < 1e-5


class TestTimestepRobustness:
    def test_coarsened_traces_agree(self, make_spec):
        """Test that 4 ns, 100 ns and 1 us grids agree on the same 4 ns traces."""
        results = {}
        for segment_dt in (4e-9, 1e-7, 1e-6):
            spec = make_spec(NoiseKind.OU, 6.0, kappa=5e3, segment_dt=segment_dt, fine_dt=4e-9)
            results[segment_dt] = run_ensemble(spec, N_CONVERGENCE, chunk_size=250).site_mean()
        reference = results[4e-9]
        for values in (results[1e-7], results[1e-6]):
            se = math.hypot(reference.std(ddof=1), values.std(ddof=1)) / math.sqrt(values.size)
            assert abs(reference.mean() - values.mean()) <= N_SE * se
            np.testing.assert_allclose(values, reference, atol=1e-4)


class TestMeasurementModel:
    def test_perfect_fidelity_reads_one_minus_p10(self):
        """Test E[F_m] = 1 - p10 for F_true = 1."""
        model = ArrayModel.homogeneous(100, 300, p_c=0.5, p01=0.04, p10=0.04)
        seeds = list(range(75))
        measured = measure_rows(np.ones((75, 100)), model, seeds)
        _within_se(measured, 0.96)

    def test_spam_recovery(self):
        """Test recovery of planted (0.04, 0.04) at 75 x 100 x 300 shots."""
        conditions = [np.ones((75, 100)), np.zeros((75, 100))]
        planted = ReadoutSimulator(conditions, 300, 0.5, seed=11)
        experimental = [s[0] for s in planted(np.array([0.04]), np.array([0.04]))]
        simulator = ReadoutSimulator(conditions, 300, 0.5, seed=12)
        result = fit_spam(experimental, simulator, bins=100, coarse_step=0.005, fine_step=0.0005)
        assert result.p01 == pytest.approx(0.04, abs=0.01)
        assert result.p10 == pytest.approx(0.04, abs=0.01)


class TestBenchmarkingFit:
    @pytest.mark.parametrize("seed", [1, 2, 3, 4, 5, 6, 7, 8])
    def test_planted_decay(self, seed):
        """Test recovery of F_C = 0.999653 from 75 sequences x 75 shots."""
        lengths = [1, 10, 20, 50, 100, 200]
        p = rb_decay(np.asarray(lengths, dtype=np.float64), 0.104, 6.94e-4)
        rng = make_rng(seed)
        data = rng.binomial(75, np.repeat(p[:, None], 75, axis=1)) / 75.0
        fit = fit_rb_decay(lengths, data)
        assert fit.d0 == pytest.approx(0.104, abs=0.01)
        assert abs(fit.fidelity - 0.999653) <= 5e-5


class TestSpectra:
    def test_psd_shapes(self, tmp_path):
        """Test the WN and BM slopes and the OU knee."""
        config = ExperimentConfig(
            seed=3,
            noise=NoiseConfig(fine_dt=4e-9),
            sweep=SweepConfig(kinds=(NoiseKind.WN, NoiseKind.OU, NoiseKind.BM)),
            psd=PSDConfig(),
            output=OutputConfig(output_dir=tmp_path),
        )
        wn, ou, bm = run_psd(config)[:3]
        assert wn.meta["slope"] == pytest.approx(0.0, abs=0.1)
        assert bm.meta["slope"] == pytest.approx(-2.0, abs=0.15)
        assert ou.meta["knee_hz"] == pytest.approx(ou.meta["expected_knee_hz"], rel=0.2)


class TestDeterminism:
    def test_worker_count_independent(self, tmp_path):
        """Test byte-identical CSVs with one and two worker processes."""

        def config(workers: int, name: str) -> ExperimentConfig:
            return ExperimentConfig(
                seed=8,
                workers=workers,
                chunk_size=5,
                noise=NoiseConfig(fine_dt=1e-6),
                pulse=PulseConfig(duration=40e-6),
                array=ArrayConfig(n_sites=4, n_meas=30),
                sweep=SweepConfig(realizations=20, gammas=(0.0, 6.0)),
                output=OutputConfig(output_dir=tmp_path / name),
            )

        GammaSweepExperiment(config(1, "serial")).run()
        GammaSweepExperiment(config(2, "parallel")).run()
        for name in ("gamma_sweep.csv", "gamma_sweep.json"):
            serial = (tmp_path / "serial" / "gamma_sweep" / name).read_bytes()
            parallel = (tmp_path / "parallel" / "gamma_sweep" / name).read_bytes()
            assert serial == parallel
