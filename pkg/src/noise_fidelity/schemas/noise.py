"""Noise parameter and closed-form moment input schemas."""

from typing import Annotated

from pydantic import BaseModel, Field, model_validator

from .enums import NoiseKind

# Relative tolerance used when checking that a duration is a whole number of steps.
STEP_TOLERANCE = 1e-9


def whole_steps(duration: float, dt: float) -> int | None:
    """Return duration/dt if it is an integer within tolerance, else None."""
    if dt <= 0:
        return None
    n = round(duration / dt)
    if abs(n * dt - duration) > STEP_TOLERANCE * max(duration, dt):
        return None
    return int(n)


class NoiseParams(BaseModel):
    """Parameters of one noise realization.

    ``gamma`` is in s^-1/2 for WN and OU and in s^-3/2 for BM.
    ``kappa`` is ignored unless ``kind`` is OU.
    """

    model_config = {"frozen": True}

    kind: NoiseKind
    gamma: Annotated[float, Field(ge=0.0, allow_inf_nan=False)]
    kappa: Annotated[float, Field(ge=0.0, allow_inf_nan=False)] = 0.0
    fine_dt: Annotated[float, Field(gt=0.0, allow_inf_nan=False)] = 4e-9
    duration: Annotated[float, Field(gt=0.0, allow_inf_nan=False)]
    seed: Annotated[int, Field(ge=0, lt=1 << 64)] = 0

    @model_validator(mode="after")
    def validate_duration_grid(self) -> "NoiseParams":
        """Ensure duration is an integer multiple of fine_dt."""
        if whole_steps(self.duration, self.fine_dt) is None:
            raise ValueError("duration must be an integer multiple of fine_dt")
        return self

    @property
    def n_steps(self) -> int:
        """Number of fine-grid steps."""
        n = whole_steps(self.duration, self.fine_dt)
        assert n is not None
        return n


class MomentSpec(BaseModel):
    """Inputs of the closed-form fidelity moments."""

    model_config = {"frozen": True}

    kind: NoiseKind
    gamma: Annotated[float, Field(ge=0.0, allow_inf_nan=False)]
    kappa: Annotated[float, Field(ge=0.0, allow_inf_nan=False)] = 0.0
    s0: Annotated[float, Field(ge=-1.0, le=1.0, allow_inf_nan=False)] = 0.0

    @property
    def floor(self) -> float:
        """Long-time limit of the mean fidelity, (1 + S0^2)/2."""
        return 0.5 * (1.0 + self.s0 * self.s0)

    @property
    def prefactor(self) -> float:
        """Variance prefactor (1 - S0^2)^2 / 8."""
        return (1.0 - self.s0 * self.s0) ** 2 / 8.0
