"""Explicit weak second-order Platen step for scalar-noise Ito SDEs.

For dY = a(Y) dt + b(Y) dW with increment dW = N sqrt(dt), one step is::

    U   = Y + a(Y) dt + b(Y) dW
    U+- = Y + a(Y) dt +- b(Y) sqrt(dt)
    Y'  = Y + 1/2 (a(U) + a(Y)) dt
            + 1/4 (b(U+) + b(U-) + 2 b(Y)) dW
            + 1/4 (b(U+) - b(U-)) (N^2 - 1) sqrt(dt)

``y`` may be any array; ``gaussian`` broadcasts against it, so a batch of
trajectories with one Gaussian per row is a single call.
"""

import math
from collections.abc import Callable
from typing import TypeVar

import numpy as np
import numpy.typing as npt

from ..errors import IntegrationDivergedError, InvalidArgumentError

ArrayT = TypeVar("ArrayT", bound=npt.NDArray[np.generic])


def _checked(value: ArrayT, what: str) -> ArrayT:
    if not np.all(np.isfinite(value)):
        raise IntegrationDivergedError(f"non-finite {what} evaluation in Platen step")
    return value


def platen_step(
    y: ArrayT,
    drift: Callable[[ArrayT], ArrayT],
    diffusion: Callable[[ArrayT], ArrayT],
    dt: float,
    gaussian: float | npt.NDArray[np.float64],
) -> ArrayT:
    """Advance ``y`` by one weak order-2 Platen step.

    Args:
        y: Current state.
        drift: Drift coefficient a(y).
        diffusion: Diffusion coefficient b(y).
        dt: Timestep, > 0.
        gaussian: Standard-normal draw(s) N with dW = N sqrt(dt).

    Returns:
        The state after one step.
    """
    if not dt > 0:
        raise InvalidArgumentError(f"dt must be > 0, got {dt}")
    sqrt_dt = math.sqrt(dt)
    a0 = _checked(drift(y), "drift")
    b0 = _checked(diffusion(y), "diffusion")
    dw = gaussian * sqrt_dt

    base = y + a0 * dt
    support = base + b0 * dw
    support_plus = base + b0 * sqrt_dt
    support_minus = base - b0 * sqrt_dt

    a_support = _checked(drift(support), "drift")
    b_plus = _checked(diffusion(support_plus), "diffusion")
    b_minus = _checked(diffusion(support_minus), "diffusion")

    result = (
        y
        + 0.5 * (a_support + a0) * dt
        + 0.25 * (b_plus + b_minus + 2.0 * b0) * dw
        + 0.25 * (b_plus - b_minus) * (gaussian * gaussian - 1.0) * sqrt_dt
    )
    return _checked(result, "step")  # type: ignore[no-any-return]
