"""Enums for toolkit schemas."""

from enum import Enum


class NoiseKind(str, Enum):
    """Noise process driving the amplitude channel."""

    WN = "wn"  # white noise
    OU = "ou"  # Ornstein-Uhlenbeck
    BM = "bm"  # time-integrated Wiener process


class NoiseMode(str, Enum):
    """Where amplitude noise enters relative to the calibration curve."""

    RABI = "rabi"  # additive in Rabi frequency (phase units)
    SETPOINT = "setpoint"  # additive in setpoint, mapped through the local curve slope


class ExperimentKind(str, Enum):
    """Experiment families the harness can run."""

    GAMMA_SWEEP = "gamma_sweep"
    TIME_SWEEP = "time_sweep"
    DISTRIBUTION = "distribution"
    VARIANCE_SWEEP = "variance_sweep"
    CONVERGENCE = "convergence"
    PSD = "psd"
    RB = "rb"
    SPAM_FIT = "spam_fit"
    REPLAY = "replay"
