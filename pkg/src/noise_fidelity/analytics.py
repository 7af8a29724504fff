"""Closed-form fidelity moments for commuting amplitude noise.

For S^dagger S = I and noise commuting with the drive, the fidelity of one
realization is F = cos^2(dX) + S0^2 sin^2(dX) with dX = X_t - X_0 Gaussian of
variance s2(t). Then

    E[F]   = (1 + S0^2)/2 + (1 - S0^2)/2 * exp(-2 s2)
    Var[F] = (1 - S0^2)^2 / 8 * (1 - exp(-4 s2))^2

with s2 = gamma^2 t (WN), gamma^2 tau_kappa(t) (OU, X_0 = 0) and
gamma^2 t^3 / 3 (BM).
"""

import math

import numpy as np
import numpy.typing as npt

from .errors import InvalidArgumentError
from .schemas import MomentSpec, NoiseKind

FloatArray = npt.NDArray[np.float64]


def fidelity_from_displacement(
    s0: float, dx: float | FloatArray
) -> float | FloatArray:
    """Fidelity cos^2(dX) + S0^2 sin^2(dX) of a commuting-noise realization."""
    if not -1.0 <= s0 <= 1.0:
        raise InvalidArgumentError(f"|S0| must be <= 1, got {s0}")
    sin2 = np.sin(dx) ** 2
    result = 1.0 - (1.0 - s0 * s0) * sin2
    if np.ndim(result) == 0:
        return float(result)
    return np.asarray(result, dtype=np.float64)


def tau_kappa(kappa: float, t: float) -> float:
    """Effective accumulation time (1 - exp(-2 kappa t)) / (2 kappa) of OU noise."""
    if not kappa > 0:
        raise InvalidArgumentError(f"kappa must be > 0, got {kappa}")
    if t < 0:
        raise InvalidArgumentError(f"t must be >= 0, got {t}")
    return -math.expm1(-2.0 * kappa * t) / (2.0 * kappa)


def displacement_variance(spec: MomentSpec, t: float) -> float:
    """Variance of X_t - X_0 of the noise process in ``spec``."""
    if t < 0:
        raise InvalidArgumentError(f"t must be >= 0, got {t}")
    g2 = spec.gamma * spec.gamma
    if spec.kind is NoiseKind.WN:
        return g2 * t
    if spec.kind is NoiseKind.OU:
        # kappa = 0 is the white-noise limit of tau_kappa
        return g2 * (tau_kappa(spec.kappa, t) if spec.kappa > 0 else t)
    return g2 * t**3 / 3.0


def mean_fidelity(spec: MomentSpec, t: float) -> float:
    """Expected fidelity after noise of duration ``t``."""
    s2 = displacement_variance(spec, t)
    return spec.floor + (1.0 - spec.floor) * math.exp(-2.0 * s2)


def var_fidelity(spec: MomentSpec, t: float) -> float:
    """Fidelity variance after noise of duration ``t``."""
    s2 = displacement_variance(spec, t)
    return spec.prefactor * math.expm1(-4.0 * s2) ** 2


def sample_moment_bands(spec: MomentSpec, t: float, n_realizations: int) -> tuple[float, float]:
    """Mean fidelity and the 1-sigma band of a sample mean over ``n_realizations``.

    Returns:
        (mean, sqrt(var / n_realizations)).
    """
    if n_realizations < 2:
        raise InvalidArgumentError(f"n_realizations must be >= 2, got {n_realizations}")
    return mean_fidelity(spec, t), math.sqrt(var_fidelity(spec, t) / n_realizations)
