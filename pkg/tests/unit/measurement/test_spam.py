"""Tests for SPAM fitting."""

import numpy as np
import pytest

from noise_fidelity.errors import FitFailedError, InvalidArgumentError
from noise_fidelity.measurement import ReadoutSimulator, fit_spam

OFFSETS = np.linspace(0.0, 0.02, 200)


def shifted(p01, p10):
    """Deterministic simulator whose samples sit at 1 - p10 minus fixed offsets."""
    return [(1 - p10)[:, None] - OFFSETS[None, :]]


@pytest.fixture
def experimental() -> np.ndarray:
    """Samples generated by the shifted simulator at p10 = 0.04."""
    return (1 - 0.04) - OFFSETS


class TestFitSpam:
    def test_recovers_planted_p10(self, experimental):
        """Test that the coarse-to-fine search lands on the planted value."""
        result = fit_spam(
            [experimental],
            shifted,
            bins=100,
            bounds=((0.0, 0.2), (0.0, 0.2)),
            coarse_step=0.05,
            fine_step=0.01,
        )
        assert result.p10 == pytest.approx(0.04)
        assert result.p01 == 0.0
        assert result.divergence == pytest.approx(0.0, abs=1e-6)
        assert result.n_evaluations == 25 + 6 * 11

    def test_accepts_single_array(self, experimental):
        """Test that a bare 1-D array is one condition."""
        result = fit_spam(
            experimental,
            shifted,
            bounds=((0.0, 0.1), (0.0, 0.1)),
            coarse_step=0.05,
            fine_step=0.01,
        )
        assert result.p10 == pytest.approx(0.04)

    def test_tie_break_by_sample_mean(self):
        """Test that equal divergences are resolved by the closest mean."""
        data = np.full(50, 0.555)

        def coarse_bins(p01, p10):
            # every candidate lands in the same bin; means differ by p01
            return [np.full((p01.shape[0], 50), 0.5) + 0.09 * p01[:, None]]

        result = fit_spam(
            [data],
            coarse_bins,
            bins=2,
            bounds=((0.0, 1.0), (0.0, 0.0)),
            coarse_step=0.25,
            fine_step=0.05,
        )
        assert result.p01 == pytest.approx(0.6)

    def test_invalid_bounds(self, experimental):
        """Test that bounds must lie in [0, 1]."""
        with pytest.raises(InvalidArgumentError):
            fit_spam([experimental], shifted, bounds=((0.0, 1.5), (0.0, 0.1)))

    def test_invalid_steps(self, experimental):
        """Test that the fine step cannot exceed the coarse step."""
        with pytest.raises(InvalidArgumentError):
            fit_spam([experimental], shifted, coarse_step=0.01, fine_step=0.02)

    def test_empty_dataset(self):
        """Test that datasets without valid samples are rejected."""
        with pytest.raises(InvalidArgumentError):
            fit_spam([np.full(5, np.nan)], shifted)

    def test_wrong_condition_count(self, experimental):
        """Test that the simulator must match the number of conditions."""
        with pytest.raises(InvalidArgumentError):
            fit_spam([experimental, experimental], shifted, coarse_step=0.5, fine_step=0.5)

    def test_all_missing_simulation(self, experimental):
        """Test FitFailedError when every simulated point is empty."""

        def missing(p01, p10):
            return [np.full((p01.shape[0], 10), np.nan)]

        with pytest.raises(FitFailedError) as exc_info:
            fit_spam([experimental], missing, coarse_step=0.5, fine_step=0.5)
        assert "evaluations" in exc_info.value.diagnostics


class TestReadoutSimulator:
    def test_shapes(self):
        """Test one (points, realizations) array per condition."""
        conditions = [np.ones((4, 3)), np.zeros((4, 3))]
        simulator = ReadoutSimulator(conditions, n_meas=10, p_c=0.5, seed=1)
        out = simulator(np.array([0.0, 0.1]), np.array([0.0, 0.1]))
        assert len(out) == 2
        assert out[0].shape == (2, 4)
        np.testing.assert_array_equal(out[0][0], np.ones(4))
        np.testing.assert_array_equal(out[1][0], np.zeros(4))

    def test_frozen_draws(self):
        """Test that repeated calls reuse the same random layers."""
        simulator = ReadoutSimulator([np.full((3, 2), 0.9)], n_meas=20, p_c=0.5, seed=2)
        p = np.array([0.05])
        np.testing.assert_array_equal(simulator(p, p)[0], simulator(p, p)[0])
