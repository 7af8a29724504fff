"""Tests for the error hierarchy."""

import pytest

from noise_fidelity.errors import (
    AlignmentError,
    CalibrationRangeError,
    ConfigError,
    FitFailedError,
    IntegrationDivergedError,
    InvalidArgumentError,
    NoiseFidelityError,
)


class TestErrorHierarchy:
    def test_all_derive_from_base(self):
        """Test that every toolkit error is a NoiseFidelityError."""
        for cls in (
            AlignmentError,
            CalibrationRangeError,
            ConfigError,
            FitFailedError,
            IntegrationDivergedError,
            InvalidArgumentError,
        ):
            assert issubclass(cls, NoiseFidelityError)

    def test_invalid_argument_is_value_error(self):
        """Test that argument errors can be caught as ValueError."""
        with pytest.raises(ValueError):
            raise CalibrationRangeError("out of range")

    def test_divergence_is_arithmetic_error(self):
        """Test that integration failures are ArithmeticErrors."""
        assert issubclass(IntegrationDivergedError, ArithmeticError)


class TestToDict:
    def test_base_payload(self):
        """Test the generic error payload."""
        payload = ConfigError("bad file").to_dict()
        assert payload == {"error": "ConfigError", "message": "bad file"}

    def test_fit_failed_includes_diagnostics(self):
        """Test that FitFailedError carries its diagnostics."""
        error = FitFailedError("no convergence", {"n_evaluations": 12})
        payload = error.to_dict()
        assert payload["error"] == "FitFailedError"
        assert payload["diagnostics"] == {"n_evaluations": 12}

    def test_fit_failed_default_diagnostics(self):
        """Test that diagnostics default to an empty dict."""
        assert FitFailedError("x").diagnostics == {}

    def test_alignment_error_lists_sorted_unique_ids(self):
        """Test that missing IDs are deduplicated and sorted."""
        error = AlignmentError([5, 2, 5, 1], "measurements")
        assert error.missing_ids == [1, 2, 5]
        assert error.source == "measurements"
        assert "1, 2, 5" in str(error)
        payload = error.to_dict()
        assert payload["missing_ids"] == [1, 2, 5]
        assert payload["source"] == "measurements"

    def test_alignment_error_truncates_message(self):
        """Test that long ID lists are truncated in the message only."""
        error = AlignmentError(range(50), "traces")
        assert str(error).endswith("...")
        assert len(error.missing_ids) == 50
