"""Drive pulse and amplitude calibration schemas."""

import csv
import math
from pathlib import Path
from typing import Annotated, Self

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..errors import CalibrationRangeError, InvalidArgumentError
from .noise import whole_steps

DEFAULT_MIN_SEGMENT = 400e-9


class Segment(BaseModel):
    """One piecewise-constant drive segment."""

    model_config = {"frozen": True}

    setpoint: Annotated[float, Field(ge=0.0, allow_inf_nan=False)]
    detuning: Annotated[float, Field(allow_inf_nan=False)] = 0.0  # rad/s
    phase: Annotated[float, Field(allow_inf_nan=False)] = 0.0  # drive axis angle, rad


class PulseSchedule(BaseModel):
    """Piecewise-constant drive with noise injected during the first ``noise_duration``."""

    model_config = {"frozen": True}

    segment_dt: Annotated[float, Field(gt=0.0, allow_inf_nan=False)]
    segments: Annotated[tuple[Segment, ...], Field(min_length=1)]
    noise_duration: Annotated[float, Field(ge=0.0, allow_inf_nan=False)] = 0.0

    @model_validator(mode="after")
    def validate_noise_window(self) -> "PulseSchedule":
        """Ensure the noise window lies on the segment grid inside the pulse."""
        n = whole_steps(self.noise_duration, self.segment_dt) if self.noise_duration else 0
        if n is None:
            raise ValueError("noise_duration must be an integer multiple of segment_dt")
        if n > len(self.segments):
            raise ValueError("noise_duration exceeds total_duration")
        return self

    @classmethod
    def constant(
        cls,
        setpoint: float,
        duration: float,
        segment_dt: float,
        noise_duration: float = 0.0,
        detuning: float = 0.0,
        phase: float = 0.0,
    ) -> "PulseSchedule":
        """Build a constant-amplitude pulse of the given duration."""
        n = whole_steps(duration, segment_dt)
        if n is None or n < 1:
            raise InvalidArgumentError("duration must be a positive multiple of segment_dt")
        segment = Segment(setpoint=setpoint, detuning=detuning, phase=phase)
        return cls(segment_dt=segment_dt, segments=(segment,) * n, noise_duration=noise_duration)

    @property
    def total_duration(self) -> float:
        return len(self.segments) * self.segment_dt

    @property
    def n_noise_steps(self) -> int:
        if not self.noise_duration:
            return 0
        n = whole_steps(self.noise_duration, self.segment_dt)
        assert n is not None
        return n

    def with_noise_duration(self, noise_duration: float) -> "PulseSchedule":
        return PulseSchedule(
            segment_dt=self.segment_dt, segments=self.segments, noise_duration=noise_duration
        )

    def refine(self, factor: int) -> "PulseSchedule":
        """Split every segment into ``factor`` equal sub-segments."""
        if factor < 1:
            raise InvalidArgumentError("refinement factor must be >= 1")
        if factor == 1:
            return self
        segments = tuple(s for s in self.segments for _ in range(factor))
        return PulseSchedule(
            segment_dt=self.segment_dt / factor,
            segments=segments,
            noise_duration=self.noise_duration,
        )

    def runs(self) -> list[tuple[int, int, Segment]]:
        """Group consecutive identical segments.

        Returns:
            List of (start index, length, segment) tuples.
        """
        result: list[tuple[int, int, Segment]] = []
        start = 0
        for k in range(1, len(self.segments) + 1):
            if k == len(self.segments) or self.segments[k] != self.segments[start]:
                result.append((start, k - start, self.segments[start]))
                start = k
        return result


class AmplitudeCalibration(BaseModel):
    """Monotone piecewise-linear map from amplitude setpoint to Rabi frequency (rad/s)."""

    model_config = {"frozen": True}

    setpoints: Annotated[tuple[float, ...], Field(min_length=2)]
    rabi: Annotated[tuple[float, ...], Field(min_length=2)]
    min_segment: Annotated[float, Field(gt=0.0, allow_inf_nan=False)] = DEFAULT_MIN_SEGMENT

    @field_validator("setpoints")
    @classmethod
    def validate_setpoints(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        """Ensure setpoints start at 0 and strictly increase."""
        if v[0] != 0.0:
            raise ValueError("calibration curve must start at setpoint 0")
        if any(b <= a for a, b in zip(v, v[1:], strict=False)):
            raise ValueError("setpoints must be strictly increasing")
        return v

    @model_validator(mode="after")
    def validate_curve(self) -> "AmplitudeCalibration":
        """Ensure the curve is anchored at the origin and non-decreasing."""
        if len(self.rabi) != len(self.setpoints):
            raise ValueError("setpoints and rabi must have equal length")
        if self.rabi[0] != 0.0:
            raise ValueError("calibration curve must satisfy curve(0) = 0")
        if any(b < a for a, b in zip(self.rabi, self.rabi[1:], strict=False)):
            raise ValueError("calibration curve must be non-decreasing")
        return self

    @classmethod
    def identity(
        cls, max_setpoint: float = 2 * math.pi * 1e8, min_segment: float = DEFAULT_MIN_SEGMENT
    ) -> Self:
        """Linear-regime calibration where the setpoint is the Rabi frequency in rad/s."""
        return cls(setpoints=(0.0, max_setpoint), rabi=(0.0, max_setpoint), min_segment=min_segment)

    @classmethod
    def from_csv(cls, path: Path, min_segment: float = DEFAULT_MIN_SEGMENT) -> Self:
        """Load a two-column CSV (setpoint, rabi_hz); a header row is optional."""
        setpoints: list[float] = []
        rabi: list[float] = []
        with open(path, newline="", encoding="utf-8") as f:
            for row in csv.reader(f):
                if not row or row[0].lstrip().startswith("#"):
                    continue
                try:
                    setpoint, rabi_hz = float(row[0]), float(row[1])
                except ValueError:
                    if not setpoints:
                        continue  # header
                    raise
                setpoints.append(setpoint)
                rabi.append(2 * math.pi * rabi_hz)
        return cls(setpoints=tuple(setpoints), rabi=tuple(rabi), min_segment=min_segment)

    @property
    def max_setpoint(self) -> float:
        return self.setpoints[-1]

    def rabi_frequency(self, setpoint: float) -> float:
        """Interpolated Rabi frequency; exact at knots."""
        if not self.setpoints[0] <= setpoint <= self.setpoints[-1]:
            raise CalibrationRangeError(
                f"setpoint {setpoint!r} outside [{self.setpoints[0]}, {self.setpoints[-1]}]"
            )
        return float(np.interp(setpoint, self.setpoints, self.rabi))

    def setpoint_for(self, rabi: float) -> float:
        """Smallest setpoint producing the requested Rabi frequency."""
        if not self.rabi[0] <= rabi <= self.rabi[-1]:
            raise CalibrationRangeError(
                f"Rabi frequency {rabi!r} outside [{self.rabi[0]}, {self.rabi[-1]}]"
            )
        i = int(np.searchsorted(self.rabi, rabi, side="left"))
        if i == 0 or self.rabi[i] == rabi:
            return self.setpoints[i]
        r0, r1 = self.rabi[i - 1], self.rabi[i]
        s0, s1 = self.setpoints[i - 1], self.setpoints[i]
        return s0 + (rabi - r0) * (s1 - s0) / (r1 - r0)

    def slope(self, setpoint: float) -> float:
        """Local derivative d(rabi)/d(setpoint) of the linear piece containing the setpoint."""
        if not self.setpoints[0] <= setpoint <= self.setpoints[-1]:
            raise CalibrationRangeError(f"setpoint {setpoint!r} outside calibration domain")
        i = int(np.searchsorted(self.setpoints, setpoint, side="right"))
        i = min(max(i, 1), len(self.setpoints) - 1)
        ds = self.setpoints[i] - self.setpoints[i - 1]
        return (self.rabi[i] - self.rabi[i - 1]) / ds
