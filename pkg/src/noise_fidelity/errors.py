"""Exception hierarchy for the toolkit.

Every error carries a machine-readable form via ``to_dict`` so the CLI can
report failures as JSON.
"""

from collections.abc import Iterable, Mapping
from typing import Any


class NoiseFidelityError(Exception):
    """Base class for all toolkit errors."""

    def to_dict(self) -> dict[str, Any]:
        """Serialize the error for machine-readable reporting."""
        return {"error": type(self).__name__, "message": str(self)}


class InvalidArgumentError(NoiseFidelityError, ValueError):
    """An argument is outside its documented domain."""


class CalibrationRangeError(InvalidArgumentError):
    """A setpoint lies outside the calibration curve's domain."""


class ConstraintViolationError(NoiseFidelityError, ValueError):
    """A pulse schedule violates a hardware constraint."""


class IntegrationDivergedError(NoiseFidelityError, ArithmeticError):
    """The stochastic integrator produced non-finite values or lost normalization."""


class CompositePulseError(NoiseFidelityError):
    """A composite pulse could not be constructed."""


class ConfigError(NoiseFidelityError):
    """Configuration could not be loaded."""


class FitFailedError(NoiseFidelityError, RuntimeError):
    """A fit did not converge."""

    def __init__(self, message: str, diagnostics: Mapping[str, Any] | None = None) -> None:
        super().__init__(message)
        self.diagnostics: dict[str, Any] = dict(diagnostics or {})

    def to_dict(self) -> dict[str, Any]:
        payload = super().to_dict()
        payload["diagnostics"] = self.diagnostics
        return payload


class AlignmentError(NoiseFidelityError):
    """Replay inputs do not share the same realization IDs."""

    def __init__(self, missing_ids: Iterable[int], source: str) -> None:
        self.missing_ids = sorted(set(missing_ids))
        self.source = source
        shown = ", ".join(str(i) for i in self.missing_ids[:20])
        suffix = " ..." if len(self.missing_ids) > 20 else ""
        super().__init__(f"realization IDs missing from {source}: {shown}{suffix}")

    def to_dict(self) -> dict[str, Any]:
        payload = super().to_dict()
        payload["missing_ids"] = self.missing_ids
        payload["source"] = self.source
        return payload
