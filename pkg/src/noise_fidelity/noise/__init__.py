"""Noise realizations: generation, coarse-graining, spectra and trace files."""

from .generation import (
    NoiseTrace,
    coarsen_trace,
    generate_trace,
    stack_increments,
    wiener_increments,
)
from .spectrum import PowerSpectrum, fit_ou_knee, psd, spectral_slope
from .traces import load_trace_dir, read_trace, trace_filename, write_trace

__all__ = [
    "NoiseTrace",
    "PowerSpectrum",
    "coarsen_trace",
    "fit_ou_knee",
    "generate_trace",
    "load_trace_dir",
    "psd",
    "read_trace",
    "spectral_slope",
    "stack_increments",
    "trace_filename",
    "wiener_increments",
    "write_trace",
]
