"""Tests for closed-form fidelity moments."""

import math

import numpy as np
import pytest

from noise_fidelity.analytics import (
    displacement_variance,
    fidelity_from_displacement,
    mean_fidelity,
    sample_moment_bands,
    tau_kappa,
    var_fidelity,
)
from noise_fidelity.errors import InvalidArgumentError
from noise_fidelity.schemas import MomentSpec, NoiseKind


class TestFidelityFromDisplacement:
    def test_zero_displacement(self):
        """Test that no displacement gives unit fidelity."""
        assert fidelity_from_displacement(0.0, 0.0) == 1.0

    def test_orthogonal_noise_operator(self):
        """Test cos^2 form for S0 = 0."""
        assert fidelity_from_displacement(0.0, 0.3) == pytest.approx(math.cos(0.3) ** 2)

    def test_commuting_noise_operator(self):
        """Test that |S0| = 1 leaves the fidelity at 1."""
        assert fidelity_from_displacement(1.0, 1.2) == pytest.approx(1.0)

    def test_array_input(self):
        """Test vectorized evaluation."""
        dx = np.array([0.0, math.pi / 2])
        result = fidelity_from_displacement(0.0, dx)
        np.testing.assert_allclose(result, [1.0, 0.0], atol=1e-15)

    def test_rejects_s0_above_one(self):
        """Test that |S0| > 1 is rejected."""
        with pytest.raises(InvalidArgumentError):
            fidelity_from_displacement(1.5, 0.1)


class TestTauKappa:
    def test_small_kappa_limit(self):
        """Test that tau_kappa approaches t for kappa t << 1."""
        assert tau_kappa(1e-3, 1e-4) == pytest.approx(1e-4, rel=1e-6)

    def test_long_time_limit(self):
        """Test saturation at 1/(2 kappa)."""
        assert tau_kappa(1e6, 1.0) == pytest.approx(0.5e-6)

    def test_rejects_non_positive_kappa(self):
        """Test that kappa must be positive."""
        with pytest.raises(InvalidArgumentError):
            tau_kappa(0.0, 1.0)

    def test_rejects_negative_time(self):
        """Test that t must be non-negative."""
        with pytest.raises(InvalidArgumentError):
            tau_kappa(1.0, -1.0)


class TestDisplacementVariance:
    def test_white_noise(self):
        """Test gamma^2 t for white noise."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        assert displacement_variance(spec, 200e-6) == pytest.approx(36 * 200e-6)

    def test_ou_without_damping_is_white(self):
        """Test that OU with kappa = 0 reduces to white noise."""
        ou = MomentSpec(kind=NoiseKind.OU, gamma=6.0, kappa=0.0)
        wn = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        assert displacement_variance(ou, 1e-4) == displacement_variance(wn, 1e-4)

    def test_brownian(self):
        """Test gamma^2 t^3 / 3 for integrated Brownian noise."""
        spec = MomentSpec(kind=NoiseKind.BM, gamma=4.22e5)
        t = 180e-6
        assert displacement_variance(spec, t) == pytest.approx(4.22e5**2 * t**3 / 3)


class TestMeanFidelity:
    def test_white_noise_reference_value(self):
        """Test WN, gamma = 6, 200 us against the reference mean."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        assert mean_fidelity(spec, 200e-6) == pytest.approx(0.992852, abs=1e-6)

    def test_ou_reference_value(self):
        """Test OU, gamma = 6, kappa = 5e3, 200 us against the reference mean."""
        spec = MomentSpec(kind=NoiseKind.OU, gamma=6.0, kappa=5e3)
        assert mean_fidelity(spec, 200e-6) == pytest.approx(0.996897, abs=1e-6)

    def test_brownian_reference_value(self):
        """Test BM, gamma = 4.22e5, 180 us lands near 0.75."""
        spec = MomentSpec(kind=NoiseKind.BM, gamma=4.22e5)
        assert mean_fidelity(spec, 180e-6) == pytest.approx(0.75, abs=0.01)

    def test_zero_time(self):
        """Test unit mean fidelity at t = 0."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        assert mean_fidelity(spec, 0.0) == 1.0

    def test_long_time_floor(self):
        """Test decay to (1 + S0^2)/2."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0, s0=0.5)
        assert mean_fidelity(spec, 10.0) == pytest.approx(0.625)

    def test_monotone_in_gamma(self):
        """Test that stronger noise lowers the mean fidelity."""
        values = [
            mean_fidelity(MomentSpec(kind=NoiseKind.WN, gamma=g), 200e-6) for g in (0, 2, 4, 6)
        ]
        assert values == sorted(values, reverse=True)


class TestVarFidelity:
    def test_white_noise_reference_value(self):
        """Test WN, gamma = 6, 200 us against the reference standard deviation."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        assert math.sqrt(var_fidelity(spec, 200e-6)) == pytest.approx(0.010037, abs=1e-6)

    def test_vanishes_for_commuting_noise(self):
        """Test zero variance for S0 = 1."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0, s0=1.0)
        assert var_fidelity(spec, 1e-3) == 0.0

    def test_long_time_limit(self):
        """Test saturation at (1 - S0^2)^2 / 8."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        assert var_fidelity(spec, 10.0) == pytest.approx(1 / 8)


class TestSampleMomentBands:
    def test_band_scales_with_sqrt_n(self):
        """Test that the band shrinks as 1/sqrt(n)."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        _, band_100 = sample_moment_bands(spec, 200e-6, 100)
        mean, band_400 = sample_moment_bands(spec, 200e-6, 400)
        assert mean == pytest.approx(0.992852, abs=1e-6)
        assert band_100 == pytest.approx(2 * band_400)

    def test_rejects_single_realization(self):
        """Test that at least two realizations are required."""
        spec = MomentSpec(kind=NoiseKind.WN, gamma=6.0)
        with pytest.raises(InvalidArgumentError):
            sample_moment_bands(spec, 1e-4, 1)
