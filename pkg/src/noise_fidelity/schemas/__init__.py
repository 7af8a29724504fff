"""Validated value types shared across the toolkit."""

from .array import ArrayModel
from .benchmarking import RBConfig
from .enums import ExperimentKind, NoiseKind, NoiseMode
from .noise import MomentSpec, NoiseParams, whole_steps
from .pulse import AmplitudeCalibration, PulseSchedule, Segment

__all__ = [
    "AmplitudeCalibration",
    "ArrayModel",
    "ExperimentKind",
    "MomentSpec",
    "NoiseKind",
    "NoiseMode",
    "NoiseParams",
    "PulseSchedule",
    "RBConfig",
    "Segment",
    "whole_steps",
]
