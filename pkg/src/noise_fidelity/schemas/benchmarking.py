"""Randomized benchmarking configuration schema."""

import math
from typing import Annotated

from pydantic import BaseModel, Field, field_validator

from .enums import NoiseKind


class RBConfig(BaseModel):
    """Randomized benchmarking campaign parameters.

    ``rabi`` is the maximum drive Rabi frequency in rad/s; gates are compiled
    into segments of ``segment_dt`` at or below it. ``noise_kind`` None runs the
    campaign without control noise.
    """

    model_config = {"frozen": True}

    lengths: Annotated[tuple[int, ...], Field(min_length=1)]
    n_sequences: Annotated[int, Field(ge=1)] = 75
    n_meas: Annotated[int, Field(ge=1)] = 75
    composite: bool = True
    rabi: Annotated[float, Field(gt=0.0, allow_inf_nan=False)] = 2 * math.pi * 117e3
    segment_dt: Annotated[float, Field(gt=0.0, allow_inf_nan=False)] = 1e-6
    noise_kind: NoiseKind | None = None
    gamma: Annotated[float, Field(ge=0.0, allow_inf_nan=False)] = 0.0
    kappa: Annotated[float, Field(ge=0.0, allow_inf_nan=False)] = 0.0

    @field_validator("lengths")
    @classmethod
    def validate_lengths(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        """Ensure every Clifford count is at least 1."""
        if any(n < 1 for n in v):
            raise ValueError("all sequence lengths must be >= 1")
        return v
