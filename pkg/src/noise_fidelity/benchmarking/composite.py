"""SCROFULOUS composite pulses robust to pulse-length (amplitude) error.

A target rotation (theta, phi) becomes three rotations
``(theta1, phi1 + phi), (pi, phi2 + phi), (theta1, phi1 + phi)`` chosen so the
first-order dependence on a fractional amplitude error cancels:

    sinc(theta1) = 2 cos(theta/2) / pi
    phi1 = arccos(-pi cos(theta1) / (2 theta1 sin(theta/2)))
    phi2 = phi1 - arccos(-pi / (2 theta1))
"""

import functools
import math
from collections.abc import Sequence

import numpy as np
from scipy import optimize

from ..errors import CompositePulseError, InvalidArgumentError
from .clifford import Rotation, compose, infidelity, rotation_unitary

VERIFY_TOLERANCE = 1e-8

# First minimum of sin(x)/x on (pi, 2 pi).
_SINC_MIN_X = 4.493409457909064
_SINC_MIN = math.sin(_SINC_MIN_X) / _SINC_MIN_X


def _sinc(x: float) -> float:
    return float(np.sinc(x / math.pi))


def arcsinc(value: float) -> float:
    """Solve sin(x)/x = value on the principal branch x in (0, 4.4934]."""
    if value >= 1.0 or value < _SINC_MIN:
        raise CompositePulseError(f"sinc(x) = {value:.6f} has no solution on the principal branch")
    if value == 0.0:
        return math.pi

    def residual(x: float) -> float:
        return _sinc(x) - value

    lo, hi = (1e-12, math.pi) if value > 0 else (math.pi, _SINC_MIN_X)
    root, info = optimize.brentq(residual, lo, hi, xtol=1e-15, full_output=True)
    if not info.converged:
        raise CompositePulseError(f"arcsinc({value}) did not converge: {info.flag}")
    return float(root)


def _arccos(value: float, what: str) -> float:
    if abs(value) > 1.0 + 1e-9:
        raise CompositePulseError(f"{what}: arccos argument {value:.6f} outside [-1, 1]")
    return math.acos(min(1.0, max(-1.0, value)))


@functools.lru_cache(maxsize=256)
def scrofulous(theta: float, phi: float = 0.0) -> tuple[Rotation, Rotation, Rotation]:
    """Three-pulse sequence implementing rotation (theta, phi) robustly.

    Args:
        theta: Target rotation angle in radians, in (0, 2 pi).
        phi: Target rotation axis azimuth.

    Returns:
        The three rotations in application order.

    Raises:
        CompositePulseError: No real solution, or the sequence fails to reproduce
            the target at zero error.
    """
    if not 0.0 < theta < 2 * math.pi:
        raise InvalidArgumentError(f"theta must lie in (0, 2 pi), got {theta}")
    theta1 = arcsinc(2.0 * math.cos(theta / 2) / math.pi)
    phi1 = _arccos(
        -math.pi * math.cos(theta1) / (2.0 * theta1 * math.sin(theta / 2)), "outer phase"
    )
    phi2 = phi1 - _arccos(-math.pi / (2.0 * theta1), "central phase")

    outer = Rotation(theta1, (phi1 + phi) % (2 * math.pi))
    sequence = (outer, Rotation(math.pi, (phi2 + phi) % (2 * math.pi)), outer)
    error = infidelity(rotation_unitary(theta, phi), compose(sequence))
    if error > VERIFY_TOLERANCE:
        raise CompositePulseError(
            f"composite sequence for theta={theta:.6f} misses the target (infidelity {error:.2e})"
        )
    return sequence


def expand(rotation: Rotation, composite: bool) -> tuple[Rotation, ...]:
    """Replace a rotation by its composite sequence when ``composite`` is set."""
    if not composite:
        return (rotation,)
    return scrofulous(rotation.angle, rotation.phase)


def rotation_error_infidelity(
    rotations: Sequence[Rotation], target: Rotation, epsilon: float
) -> float:
    """Gate infidelity of ``rotations`` with every angle scaled by (1 + epsilon)."""
    distorted = [Rotation(r.angle * (1.0 + epsilon), r.phase) for r in rotations]
    return infidelity(target.unitary(), compose(distorted))
