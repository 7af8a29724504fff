"""Tests for fidelity ensembles."""

import numpy as np
import pytest

from noise_fidelity.errors import InvalidArgumentError
from noise_fidelity.measurement import FidelityEnsemble


@pytest.fixture
def ensemble() -> FidelityEnsemble:
    """Three realizations on two sites, one measurement missing."""
    return FidelityEnsemble(
        f_true=np.array([[1.0, 0.9], [0.8, 0.8], [0.6, 0.7]]),
        f_measured=np.array([0.95, np.nan, 0.65]),
        displacements=np.array([0.1, -0.2, 0.3]),
        realization_ids=np.array([0, 1, 2]),
        metadata={"kind": "wn"},
    )


class TestFidelityEnsemble:
    def test_shape(self, ensemble: FidelityEnsemble):
        """Test realization and site counts."""
        assert ensemble.n_realizations == 3
        assert ensemble.n_sites == 2
        np.testing.assert_allclose(ensemble.site_mean(), [0.95, 0.8, 0.65])

    def test_summary(self, ensemble: FidelityEnsemble):
        """Test sample statistics of true and measured fidelities."""
        summary = ensemble.summary()
        assert summary["n_realizations"] == 3
        assert summary["true_mean"] == pytest.approx(0.8)
        assert summary["true_std"] == pytest.approx(0.15)
        assert summary["true_se"] == pytest.approx(0.15 / np.sqrt(3))
        assert summary["measured_mean"] == pytest.approx(0.8)
        assert summary["n_missing"] == 1

    def test_summary_all_missing(self):
        """Test that fully missing measurements give None statistics."""
        ensemble = FidelityEnsemble(
            f_true=np.ones((2, 1)),
            f_measured=np.full(2, np.nan),
            displacements=np.zeros(2),
            realization_ids=np.arange(2),
        )
        summary = ensemble.summary()
        assert summary["measured_mean"] is None
        assert summary["n_missing"] == 2

    def test_rows(self, ensemble: FidelityEnsemble):
        """Test long-form rows and missing measurements."""
        rows = list(ensemble.long_rows())
        assert len(rows) == 6
        assert rows[1] == {"realization": 0, "site": 1, "F_true": 0.9}
        measured = list(ensemble.measurement_rows())
        assert measured[1] == {"realization": 1, "F_measured": None}

    def test_rejects_vector_f_true(self):
        """Test that f_true must be a matrix."""
        with pytest.raises(InvalidArgumentError):
            FidelityEnsemble(
                f_true=np.ones(2),
                f_measured=np.ones(2),
                displacements=np.zeros(2),
                realization_ids=np.arange(2),
            )

    def test_rejects_length_mismatch(self):
        """Test one measurement per realization."""
        with pytest.raises(InvalidArgumentError):
            FidelityEnsemble(
                f_true=np.ones((2, 1)),
                f_measured=np.ones(3),
                displacements=np.zeros(2),
                realization_ids=np.arange(2),
            )

    def test_rejects_out_of_range(self):
        """Test that fidelities must lie in [0, 1]."""
        with pytest.raises(InvalidArgumentError):
            FidelityEnsemble(
                f_true=np.full((2, 1), 1.1),
                f_measured=np.ones(2),
                displacements=np.zeros(2),
                realization_ids=np.arange(2),
            )
