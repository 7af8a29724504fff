"""Measurement model, density estimation and SPAM fitting."""

from .density import (
    DensityEstimate,
    Histogram,
    fidelity_edges,
    histogram,
    kde,
    kl_divergence,
    silverman_bandwidth,
)
from .ensemble import FidelityEnsemble
from .readout import ReadoutSampler, measure_rows, sample_site_scales, simulate_measurements
from .spam import ReadoutSimulator, SpamFit, fit_spam

__all__ = [
    "DensityEstimate",
    "FidelityEnsemble",
    "Histogram",
    "ReadoutSampler",
    "ReadoutSimulator",
    "SpamFit",
    "fidelity_edges",
    "fit_spam",
    "histogram",
    "kde",
    "kl_divergence",
    "measure_rows",
    "sample_site_scales",
    "silverman_bandwidth",
    "simulate_measurements",
]
