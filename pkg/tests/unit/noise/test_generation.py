"""Tests for noise generation and coarse-graining."""

import math

import numpy as np
import pytest

from noise_fidelity.analytics import tau_kappa
from noise_fidelity.errors import InvalidArgumentError
from noise_fidelity.noise import (
    NoiseTrace,
    coarsen_trace,
    generate_trace,
    stack_increments,
    wiener_increments,
)
from noise_fidelity.schemas import NoiseKind, NoiseParams


class TestWienerIncrements:
    def test_variance(self):
        """Test that increments have variance dt."""
        dw = wiener_increments(100_000, 1e-6, seed=5)
        assert dw.shape == (100_000,)
        assert np.var(dw) == pytest.approx(1e-6, rel=0.03)
        assert abs(np.mean(dw)) < 5 * math.sqrt(1e-6 / 100_000)

    def test_reproducible(self):
        """Test that a seed reproduces the draws."""
        np.testing.assert_array_equal(
            wiener_increments(10, 1e-6, 9), wiener_increments(10, 1e-6, 9)
        )

    def test_invalid_arguments(self):
        """Test that n and dt are validated."""
        with pytest.raises(InvalidArgumentError):
            wiener_increments(0, 1e-6, 1)
        with pytest.raises(InvalidArgumentError):
            wiener_increments(10, 0.0, 1)


class TestNoiseTrace:
    def test_arrays_are_read_only(self, ou_trace: NoiseTrace):
        """Test that trace arrays cannot be modified."""
        with pytest.raises(ValueError):
            ou_trace.dx[0] = 1.0

    def test_shape_mismatch(self):
        """Test that dx and dqv must align."""
        with pytest.raises(InvalidArgumentError):
            NoiseTrace(dt=1.0, dx=np.zeros(3), dqv=np.zeros(2), kind=NoiseKind.WN, seed=0)

    def test_path_and_displacement(self):
        """Test the cumulative path and partial displacements."""
        trace = NoiseTrace(
            dt=1.0, dx=np.array([1.0, 2.0, -0.5]), dqv=np.zeros(3), kind=NoiseKind.WN, seed=0
        )
        np.testing.assert_allclose(trace.path(), [0.0, 1.0, 3.0, 2.5])
        assert trace.displacement() == 2.5
        assert trace.displacement(2) == 3.0
        assert trace.duration == 3.0
        with pytest.raises(InvalidArgumentError):
            trace.displacement(4)


class TestGenerateTrace:
    def test_white_noise(self, wn_params: NoiseParams):
        """Test white-noise increments and quadratic variation."""
        trace = generate_trace(wn_params)
        assert trace.n_steps == 1000
        assert trace.kind is NoiseKind.WN
        np.testing.assert_allclose(trace.dqv, 36.0 * 1e-6)
        expected = 6.0 * wiener_increments(1000, 1e-6, wn_params.seed)
        np.testing.assert_allclose(trace.dx, expected)

    def test_reproducible(self, wn_params: NoiseParams):
        """Test that equal parameters give identical traces."""
        np.testing.assert_array_equal(generate_trace(wn_params).dx, generate_trace(wn_params).dx)

    def test_seed_changes_trace(self, wn_params: NoiseParams):
        """Test that a different seed gives a different trace."""
        other = wn_params.model_copy(update={"seed": wn_params.seed + 1})
        assert not np.array_equal(generate_trace(wn_params).dx, generate_trace(other).dx)

    def test_ou_without_damping_matches_white_noise(self):
        """Test that OU with kappa = 0 reproduces gamma dW."""
        ou = NoiseParams(kind="ou", gamma=6.0, kappa=0.0, fine_dt=1e-6, duration=1e-4, seed=4)
        wn = ou.model_copy(update={"kind": NoiseKind.WN})
        np.testing.assert_allclose(generate_trace(ou).dx, generate_trace(wn).dx, atol=1e-12)

    def test_ou_quadratic_variation(self, ou_trace: NoiseTrace):
        """Test that OU carries gamma^2 dt quadratic variation per step."""
        np.testing.assert_allclose(ou_trace.dqv, 36.0 * 1e-6)

    def test_ou_stationary_variance(self):
        """Test that a long OU path settles at variance gamma^2 / (2 kappa)."""
        params = NoiseParams(
            kind="ou", gamma=2.0, kappa=1e4, fine_dt=1e-6, duration=1.0, seed=21
        )
        path = generate_trace(params).path()[10_000:]
        assert np.var(path) == pytest.approx(4.0 / 2e4, rel=0.1)

    def test_ou_displacement_variance(self):
        """Test the OU ensemble variance of X_t against gamma^2 tau_kappa(t)."""
        gamma, kappa, t = 3.0, 2e4, 1e-4
        displacements = [
            generate_trace(
                NoiseParams(kind="ou", gamma=gamma, kappa=kappa, fine_dt=1e-6, duration=t, seed=s)
            ).displacement()
            for s in range(2000)
        ]
        expected = gamma**2 * tau_kappa(kappa, t)
        assert np.var(displacements) == pytest.approx(expected, rel=0.15)

    def test_brownian_displacement_variance(self):
        """Test the BM ensemble variance of X_t against gamma^2 t^3 / 3."""
        gamma, t = 5.0, 0.1
        displacements = [
            generate_trace(
                NoiseParams(kind="bm", gamma=gamma, fine_dt=1e-3, duration=t, seed=s)
            ).displacement()
            for s in range(2000)
        ]
        expected = gamma**2 * t**3 / 3.0
        assert np.var(displacements) == pytest.approx(expected, rel=0.15)

    def test_brownian_has_no_quadratic_variation(self):
        """Test that the integrated Wiener process is smooth."""
        params = NoiseParams(kind="bm", gamma=1e5, fine_dt=1e-6, duration=1e-5, seed=2)
        trace = generate_trace(params)
        np.testing.assert_array_equal(trace.dqv, np.zeros(10))


class TestCoarsenTrace:
    def test_block_sums(self, ou_trace: NoiseTrace):
        """Test that coarse increments are block sums of fine increments."""
        coarse = coarsen_trace(ou_trace, 4e-6)
        assert coarse.n_steps == 10
        assert coarse.dt == pytest.approx(4e-6)
        np.testing.assert_allclose(coarse.dx, ou_trace.dx.reshape(10, 4).sum(axis=1))
        np.testing.assert_allclose(coarse.dqv, ou_trace.dqv.reshape(10, 4).sum(axis=1))
        assert coarse.displacement() == pytest.approx(ou_trace.displacement())
        assert coarse.seed == ou_trace.seed

    def test_identity(self, ou_trace: NoiseTrace):
        """Test that coarsening to the same dt returns the trace."""
        assert coarsen_trace(ou_trace, ou_trace.dt) is ou_trace

    def test_not_a_multiple(self, ou_trace: NoiseTrace):
        """Test that coarse_dt must be a multiple of dt."""
        with pytest.raises(InvalidArgumentError):
            coarsen_trace(ou_trace, 1.5e-6)

    def test_not_divisible(self, ou_trace: NoiseTrace):
        """Test that the step count must divide into blocks."""
        with pytest.raises(InvalidArgumentError):
            coarsen_trace(ou_trace, 3e-6)


class TestStackIncrements:
    def test_stacks_prefix(self, ou_trace: NoiseTrace, wn_params: NoiseParams):
        """Test stacking the common prefix of two traces."""
        wn = generate_trace(wn_params)
        dx, dqv = stack_increments([ou_trace, wn])
        assert dx.shape == (2, 40)
        assert dqv.shape == (2, 40)
        np.testing.assert_array_equal(dx[1], wn.dx[:40])

    def test_explicit_length(self, ou_trace: NoiseTrace):
        """Test stacking a requested number of steps."""
        dx, _ = stack_increments([ou_trace], n_steps=5)
        assert dx.shape == (1, 5)

    def test_too_long(self, ou_trace: NoiseTrace):
        """Test that requesting more steps than available raises."""
        with pytest.raises(InvalidArgumentError):
            stack_increments([ou_trace], n_steps=41)

    def test_dt_mismatch(self, ou_trace: NoiseTrace):
        """Test that traces must share dt."""
        with pytest.raises(InvalidArgumentError):
            stack_increments([ou_trace, coarsen_trace(ou_trace, 2e-6)])

    def test_empty(self):
        """Test that at least one trace is required."""
        with pytest.raises(InvalidArgumentError):
            stack_increments([])
