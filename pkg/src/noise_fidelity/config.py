"""Configuration settings loaded from TOML files and environment variables."""

import hashlib
import json
import math
import os
import tomllib
from collections.abc import Mapping
from pathlib import Path
from typing import Annotated, Any

from pydantic import Field, ValidationError, field_validator
from pydantic_settings import BaseSettings

from .errors import ConfigError
from .measurement import sample_site_scales
from .schemas import (
    AmplitudeCalibration,
    ArrayModel,
    ExperimentKind,
    NoiseKind,
    NoiseMode,
    PulseSchedule,
    RBConfig,
)
from .seeding import SITE_STREAM, derive_seed

WORKERS_ENV = "NOISE_FIDELITY_WORKERS"

# Fields that cannot change results and are left out of the config hash.
_UNHASHED = {"workers", "log_level"}
_UNHASHED_OUTPUT = {"output_dir", "plots"}


def _time_grid(stop: float, step: float) -> tuple[float, ...]:
    n = int(round(stop / step))
    return tuple(k * step for k in range(n + 1))


class NoiseConfig(BaseSettings):
    """Noise process configuration."""

    kind: NoiseKind = NoiseKind.OU
    gamma: Annotated[float, Field(ge=0.0)] = 6.0
    kappa: Annotated[float, Field(ge=0.0)] = 5e3
    fine_dt: Annotated[float, Field(gt=0.0)] = 4e-9  # generation timestep, seconds
    mode: NoiseMode = NoiseMode.RABI

    model_config = {"env_prefix": "NOISE_"}


class PulseConfig(BaseSettings):
    """Drive pulse configuration."""

    rabi_hz: Annotated[float, Field(ge=0.0)] = 50e3
    duration: Annotated[float, Field(gt=0.0)] = 200e-6
    segment_dt: Annotated[float, Field(gt=0.0)] = 1e-6
    noise_duration: Annotated[float, Field(ge=0.0)] | None = None  # None = whole pulse
    detuning_hz: float = 0.0
    calibration_file: Path | None = None
    min_segment: Annotated[float, Field(gt=0.0)] = 400e-9

    model_config = {"env_prefix": "PULSE_"}

    def calibration(self) -> AmplitudeCalibration:
        """Load the calibration curve, or the identity curve when no file is set."""
        if self.calibration_file is None:
            return AmplitudeCalibration.identity(min_segment=self.min_segment)
        return AmplitudeCalibration.from_csv(self.calibration_file, min_segment=self.min_segment)

    def schedule(
        self,
        calib: AmplitudeCalibration,
        noise_duration: float | None = None,
        segment_dt: float | None = None,
    ) -> PulseSchedule:
        """Constant-drive schedule with noise over the first ``noise_duration`` seconds."""
        window = noise_duration if noise_duration is not None else self.noise_duration
        return PulseSchedule.constant(
            setpoint=calib.setpoint_for(2 * math.pi * self.rabi_hz),
            duration=self.duration,
            segment_dt=segment_dt or self.segment_dt,
            noise_duration=self.duration if window is None else window,
            detuning=2 * math.pi * self.detuning_hz,
        )


class ArrayConfig(BaseSettings):
    """Atom array and measurement configuration."""

    n_sites: Annotated[int, Field(ge=1)] = 100
    n_meas: Annotated[int, Field(ge=1)] = 300
    p_c: Annotated[float, Field(ge=0.0, le=1.0)] = 0.5
    p01: Annotated[float, Field(ge=0.0, le=1.0)] = 0.04
    p10: Annotated[float, Field(ge=0.0, le=1.0)] = 0.04
    rabi_cv: Annotated[float, Field(ge=0.0)] = 0.0014

    model_config = {"env_prefix": "ARRAY_"}

    def build(self, seed: int) -> ArrayModel:
        """Array model with per-site Rabi scales drawn from the run seed."""
        scales = sample_site_scales(self.n_sites, self.rabi_cv, derive_seed(seed, SITE_STREAM))
        return ArrayModel(
            n_sites=self.n_sites,
            n_meas=self.n_meas,
            p_c=self.p_c,
            p01=self.p01,
            p10=self.p10,
            site_scales=tuple(float(s) for s in scales),
        )


class SweepConfig(BaseSettings):
    """Monte-Carlo sweep grids shared by the fidelity experiments."""

    realizations: Annotated[int, Field(ge=1)] = 75
    gammas: tuple[float, ...] = (0.0, 2.0, 4.0, 6.0, 8.0, 10.0)
    times: tuple[float, ...] = _time_grid(180e-6, 20e-6)
    kinds: tuple[NoiseKind, ...] = (NoiseKind.WN, NoiseKind.OU, NoiseKind.BM)
    kind_gammas: dict[NoiseKind, float] = {
        NoiseKind.WN: 6.0,
        NoiseKind.OU: 6.0,
        NoiseKind.BM: 4.22e5,
    }
    distribution_times: tuple[float, ...] = (0.0, 180e-6)
    bins: Annotated[int, Field(ge=1)] = 100
    kde_points: Annotated[int, Field(ge=2)] = 1000
    convergence_dts: tuple[float, ...] = (4e-9, 1e-7, 1e-6)
    convergence_realizations: Annotated[int, Field(ge=2)] = 200
    experiment_file: Path | None = None  # CSV key,F_measured overlaid as the experiment curve

    model_config = {"env_prefix": "SWEEP_"}

    @field_validator("times", "distribution_times", "convergence_dts", "gammas")
    @classmethod
    def validate_non_negative(cls, v: tuple[float, ...]) -> tuple[float, ...]:
        """Ensure grids are non-empty and non-negative."""
        if not v:
            raise ValueError("grid must not be empty")
        if any(x < 0 for x in v):
            raise ValueError("grid values must be >= 0")
        return v

    def gamma_for(self, kind: NoiseKind) -> float:
        """Noise strength used for ``kind`` in per-kind sweeps."""
        if kind not in self.kind_gammas:
            raise ConfigError(f"no gamma configured for noise kind {kind.value}")
        return self.kind_gammas[kind]


class PSDConfig(BaseSettings):
    """Power spectral density estimation configuration."""

    duration: Annotated[float, Field(gt=0.0)] = 200e-6
    n_traces: Annotated[int, Field(ge=1)] = 100
    nperseg: Annotated[int, Field(ge=8)] = 16384
    ou_kappa: Annotated[float, Field(gt=0.0)] = 5e6
    f_min: Annotated[float, Field(gt=0.0)] = 5e4  # slope and knee fit band, Hz
    f_max: Annotated[float, Field(gt=0.0)] = 1e7
    n_examples: Annotated[int, Field(ge=0)] = 3  # sample paths per kind, 0 disables
    example_points: Annotated[int, Field(ge=2)] = 1001

    model_config = {"env_prefix": "PSD_"}


class RBSettings(BaseSettings):
    """Randomized benchmarking configuration."""

    lengths: tuple[int, ...] = (1, 10, 20, 50, 100, 200)
    n_sequences: Annotated[int, Field(ge=1)] = 75
    n_meas: Annotated[int, Field(ge=1)] = 75
    composite: bool = True
    rabi_hz: Annotated[float, Field(gt=0.0)] = 117e3
    segment_dt: Annotated[float, Field(gt=0.0)] = 1e-6
    noise_kind: NoiseKind | None = NoiseKind.OU
    gamma: Annotated[float, Field(ge=0.0)] = 6.0
    kappa: Annotated[float, Field(ge=0.0)] = 5e3

    model_config = {"env_prefix": "RB_"}

    def to_rb_config(self) -> RBConfig:
        return RBConfig(
            lengths=self.lengths,
            n_sequences=self.n_sequences,
            n_meas=self.n_meas,
            composite=self.composite,
            rabi=2 * math.pi * self.rabi_hz,
            segment_dt=self.segment_dt,
            noise_kind=self.noise_kind,
            gamma=self.gamma,
            kappa=self.kappa,
        )


class SpamConfig(BaseSettings):
    """SPAM fit configuration.

    Without ``experiment_files`` the fit runs on synthetic data planted with the
    array's p01/p10. With files, each holds one zero-noise condition (a column
    ``F_measured``): the first after the plain 20 pi pulse, the second after the
    same pulse followed by a pi flip.
    """

    p01_bounds: tuple[float, float] = (0.0, 1.0)
    p10_bounds: tuple[float, float] = (0.0, 1.0)
    coarse_step: Annotated[float, Field(gt=0.0)] = 0.005
    fine_step: Annotated[float, Field(gt=0.0)] = 0.0005
    bins: Annotated[int, Field(ge=1)] = 100
    experiment_files: tuple[Path, ...] = ()

    model_config = {"env_prefix": "SPAM_"}


class ReplayConfig(BaseSettings):
    """Replay of persisted noise traces against measured fidelities."""

    noise_dir: Path | None = None
    measurements_file: Path | None = None

    model_config = {"env_prefix": "REPLAY_"}


class OutputConfig(BaseSettings):
    """Output configuration."""

    output_dir: Path = Path("./runs")
    plots: bool = False
    save_traces: bool = False

    model_config = {"env_prefix": "OUTPUT_"}


_SECTIONS: dict[str, type[BaseSettings]] = {
    "noise": NoiseConfig,
    "pulse": PulseConfig,
    "array": ArrayConfig,
    "sweep": SweepConfig,
    "psd": PSDConfig,
    "rb": RBSettings,
    "spam": SpamConfig,
    "replay": ReplayConfig,
    "output": OutputConfig,
}

# (section, field) pairs holding file paths, resolved against the config file's directory.
_PATH_FIELDS = (
    ("pulse", "calibration_file"),
    ("sweep", "experiment_file"),
    ("spam", "experiment_files"),
    ("replay", "noise_dir"),
    ("replay", "measurements_file"),
)


class ExperimentConfig(BaseSettings):
    """Experiment settings combining all configs."""

    experiment: ExperimentKind = ExperimentKind.GAMMA_SWEEP
    seed: Annotated[int, Field(ge=0, lt=2**64)] = 0
    workers: Annotated[int, Field(ge=1)] = 1
    chunk_size: Annotated[int, Field(ge=1)] = 25  # realizations per work item
    log_level: str = "INFO"
    noise: NoiseConfig = Field(default_factory=NoiseConfig)
    pulse: PulseConfig = Field(default_factory=PulseConfig)
    array: ArrayConfig = Field(default_factory=ArrayConfig)
    sweep: SweepConfig = Field(default_factory=SweepConfig)
    psd: PSDConfig = Field(default_factory=PSDConfig)
    rb: RBSettings = Field(default_factory=RBSettings)
    spam: SpamConfig = Field(default_factory=SpamConfig)
    replay: ReplayConfig = Field(default_factory=ReplayConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)

    model_config = {"env_prefix": "NOISE_FIDELITY_"}

    def resolved(self) -> dict[str, Any]:
        """The full configuration as JSON-compatible data."""
        return self.model_dump(mode="json")

    def config_hash(self) -> str:
        """SHA-256 of the canonical JSON of every result-relevant setting."""
        payload = self.model_dump(mode="json", exclude=_UNHASHED)
        payload["output"] = {
            k: v for k, v in payload["output"].items() if k not in _UNHASHED_OUTPUT
        }
        canonical = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    def referenced_paths(self) -> list[Path]:
        paths: list[Path] = []
        for section, name in _PATH_FIELDS:
            value = getattr(getattr(self, section), name)
            if value is None:
                continue
            paths.extend(value if isinstance(value, tuple) else (value,))
        return paths

    def check_paths(self) -> None:
        """Raise ConfigError naming every referenced file that does not exist."""
        missing = [str(p) for p in self.referenced_paths() if not p.exists()]
        if missing:
            raise ConfigError(f"referenced files do not exist: {', '.join(missing)}")

    def override(self, updates: Mapping[str, Any]) -> "ExperimentConfig":
        """Validated copy with top-level values or per-section mappings replaced."""
        data = self.model_dump()
        for key, value in updates.items():
            if key in _SECTIONS and isinstance(value, Mapping):
                data[key] = {**data[key], **value}
            else:
                data[key] = value
        try:
            return type(self).model_validate(data)
        except ValidationError as e:
            raise ConfigError(f"invalid override: {e}") from e


def _resolve_paths(data: dict[str, Any], base: Path) -> None:
    for section, name in _PATH_FIELDS:
        table = data.get(section)
        if not isinstance(table, dict) or table.get(name) is None:
            continue
        value = table[name]
        if isinstance(value, list):
            table[name] = [str(base / p) for p in value]
        else:
            table[name] = str(base / value)


def load_config(path: Path) -> ExperimentConfig:
    """Load and validate a TOML config file.

    Sections are TOML tables named after the sub-configs (``[noise]``,
    ``[pulse]``, ...). Values from the file override environment variables,
    except that ``NOISE_FIDELITY_WORKERS`` always sets the worker count.
    Relative file paths are resolved against the config file's directory.

    Args:
        path: Config file path.

    Returns:
        The validated configuration.

    Raises:
        ConfigError: Unreadable or invalid file, or missing referenced files.
    """
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, "rb") as f:
            data = tomllib.load(f)
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e

    _resolve_paths(data, path.parent)
    if WORKERS_ENV in os.environ:
        data.pop("workers", None)
    try:
        sections = {
            name: cls(**data.pop(name, {})) for name, cls in _SECTIONS.items()
        }
        config = ExperimentConfig(**data, **sections)
    except (ValidationError, TypeError) as e:
        raise ConfigError(f"invalid config {path}: {e}") from e
    config.check_paths()
    return config
