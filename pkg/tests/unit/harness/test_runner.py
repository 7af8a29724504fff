"""Tests for the ensemble runner."""

import dataclasses

import numpy as np
import pytest

from noise_fidelity.errors import InvalidArgumentError
from noise_fidelity.harness import EnsembleSpec, run_ensemble, run_ensemble_from_traces
from noise_fidelity.harness.runner import window_increments
from noise_fidelity.noise import NoiseTrace
from noise_fidelity.schemas import NoiseKind


class TestEnsembleSpec:
    def test_noise_params(self, ensemble_spec: EnsembleSpec):
        """Test per-realization seeds and the noise window length."""
        first = ensemble_spec.noise_params(0)
        second = ensemble_spec.noise_params(1)
        assert first.duration == pytest.approx(20e-6)
        assert first.n_steps == 200
        assert first.seed != second.seed

    def test_no_window_has_no_trace(self, ensemble_spec: EnsembleSpec):
        """Test that a zero noise window needs no trace."""
        pulse = ensemble_spec.pulse.with_noise_duration(0.0)
        spec = dataclasses.replace(ensemble_spec, pulse=pulse)
        assert spec.noise_params(0) is None
        assert spec.trace(0) is None

    def test_metadata(self, ensemble_spec: EnsembleSpec):
        """Test the provenance recorded with an ensemble."""
        meta = ensemble_spec.metadata()
        assert meta["kind"] == "ou"
        assert meta["t"] == pytest.approx(20e-6)
        assert meta["noise_mode"] == "rabi"
        assert meta["seed"] == 5


class TestWindowIncrements:
    def test_sums_onto_segments(self, ensemble_spec: EnsembleSpec):
        """Test that displacement over the window is preserved."""
        trace = ensemble_spec.trace(0)
        dx, dqv = window_increments(trace, ensemble_spec.pulse)
        assert dx.shape == dqv.shape == (20,)
        assert dx.sum() == pytest.approx(trace.dx.sum(), abs=1e-12)

    def test_missing_trace(self, ensemble_spec: EnsembleSpec):
        """Test that a noise window without a trace raises."""
        with pytest.raises(InvalidArgumentError):
            window_increments(None, ensemble_spec.pulse)

    def test_short_trace(self, ensemble_spec: EnsembleSpec):
        """Test that a trace shorter than the window raises."""
        trace = NoiseTrace(
            dt=1e-7, dx=np.zeros(100), dqv=np.zeros(100), kind=NoiseKind.OU, seed=0
        )
        with pytest.raises(InvalidArgumentError, match="needs 200"):
            window_increments(trace, ensemble_spec.pulse)

    def test_incommensurate_dt(self, ensemble_spec: EnsembleSpec):
        """Test that segment_dt must be a multiple of the trace dt."""
        trace = NoiseTrace(
            dt=3e-7, dx=np.zeros(100), dqv=np.zeros(100), kind=NoiseKind.OU, seed=0
        )
        with pytest.raises(InvalidArgumentError, match="not a multiple"):
            window_increments(trace, ensemble_spec.pulse)


class TestRunEnsemble:
    def test_shapes(self, ensemble_spec: EnsembleSpec):
        """Test one row per realization and one column per site."""
        ensemble = run_ensemble(ensemble_spec, 4)
        assert ensemble.f_true.shape == (4, 3)
        assert ensemble.f_measured.shape == (4,)
        np.testing.assert_array_equal(ensemble.realization_ids, [0, 1, 2, 3])
        assert np.all((ensemble.f_true > 0.9) & (ensemble.f_true <= 1.0))
        assert ensemble.metadata["gamma"] == 6.0

    def test_noiseless_is_perfect(self, ensemble_spec: EnsembleSpec):
        """Test that each site matches its own ideal target without noise."""
        spec = dataclasses.replace(ensemble_spec, gamma=0.0)
        ensemble = run_ensemble(spec, 2)
        np.testing.assert_allclose(ensemble.f_true, 1.0, atol=1e-9)

    def test_reproducible(self, ensemble_spec: EnsembleSpec):
        """Test that the master seed fixes every fidelity."""
        a = run_ensemble(ensemble_spec, 3)
        b = run_ensemble(ensemble_spec, 3)
        np.testing.assert_array_equal(a.f_true, b.f_true)
        np.testing.assert_array_equal(a.f_measured, b.f_measured)

    def test_chunking_does_not_change_results(self, ensemble_spec: EnsembleSpec):
        """Test that realizations depend only on their index."""
        whole = run_ensemble(ensemble_spec, 5, chunk_size=5)
        split = run_ensemble(ensemble_spec, 5, chunk_size=2)
        np.testing.assert_allclose(whole.f_true, split.f_true, atol=1e-12)
        np.testing.assert_array_equal(whole.displacements, split.displacements)

    def test_prefix_stability(self, ensemble_spec: EnsembleSpec):
        """Test that a larger ensemble extends a smaller one."""
        small = run_ensemble(ensemble_spec, 2, chunk_size=1)
        large = run_ensemble(ensemble_spec, 4, chunk_size=1)
        np.testing.assert_array_equal(small.f_true, large.f_true[:2])

    def test_without_measurement(self, ensemble_spec: EnsembleSpec):
        """Test that measure=False leaves F_m missing."""
        spec = dataclasses.replace(ensemble_spec, measure=False)
        ensemble = run_ensemble(spec, 2)
        assert np.all(np.isnan(ensemble.f_measured))

    @pytest.mark.parametrize("n, chunk", [(0, 25), (3, 0)])
    def test_invalid_sizes(self, ensemble_spec: EnsembleSpec, n, chunk):
        """Test that empty ensembles and chunks are rejected."""
        with pytest.raises(InvalidArgumentError):
            run_ensemble(ensemble_spec, n, chunk_size=chunk)


class TestRunEnsembleFromTraces:
    def test_matches_generated(self, ensemble_spec: EnsembleSpec):
        """Test that the generated traces reproduce the ensemble."""
        generated = run_ensemble(ensemble_spec, 3)
        traces = {i: ensemble_spec.trace(i) for i in range(3)}
        replayed = run_ensemble_from_traces(ensemble_spec, traces)
        np.testing.assert_array_equal(generated.f_true, replayed.f_true)
        np.testing.assert_array_equal(generated.f_measured, replayed.f_measured)

    def test_ids_sorted(self, ensemble_spec: EnsembleSpec):
        """Test that rows follow sorted realization IDs."""
        traces = {7: ensemble_spec.trace(7), 2: ensemble_spec.trace(2)}
        ensemble = run_ensemble_from_traces(ensemble_spec, traces)
        np.testing.assert_array_equal(ensemble.realization_ids, [2, 7])

    def test_requires_traces(self, ensemble_spec: EnsembleSpec):
        """Test that an empty mapping raises."""
        with pytest.raises(InvalidArgumentError):
            run_ensemble_from_traces(ensemble_spec, {})
