"""Noise fidelity toolkit - how classical control noise degrades qubit gate fidelity.

This package simulates a driven qubit under stochastic amplitude noise and
compares the simulated fidelities with closed-form moments:

- noise: white, Ornstein-Uhlenbeck and integrated-Brownian increment traces
- dynamics: stochastic Schrodinger equation with the Platen scheme
- analytics: mean and variance of the fidelity
- measurement: atom-array readout with SPAM errors, KDE and KL fits
- benchmarking: Clifford randomized benchmarking with SCROFULOUS pulses
- harness: reproducible experiment runs writing CSV, JSON and SVG results

Usage:
    from noise_fidelity.config import load_config
    from noise_fidelity.harness import run_experiment
"""

__version__ = "0.1.0"

from .config import ExperimentConfig, load_config
from .errors import NoiseFidelityError
from .schemas import ExperimentKind, NoiseKind, NoiseParams

__all__ = [
    "ExperimentConfig",
    "ExperimentKind",
    "NoiseFidelityError",
    "NoiseKind",
    "NoiseParams",
    "load_config",
]
