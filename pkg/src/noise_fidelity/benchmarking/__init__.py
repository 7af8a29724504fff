"""Clifford randomized benchmarking with optional composite pulses."""

from .clifford import (
    PRIMITIVES,
    CliffordGate,
    Rotation,
    clifford_group,
    clifford_index,
    compose,
    infidelity,
    inverse_table,
    multiplication_table,
    rotation_unitary,
)
from .composite import arcsinc, expand, rotation_error_infidelity, scrofulous
from .rb import (
    RBFit,
    RBResult,
    RBSequence,
    average_pulse_area,
    compile_sequence,
    fit_rb_decay,
    rb_decay,
    rb_sequence,
    run_rb,
)

__all__ = [
    "PRIMITIVES",
    "CliffordGate",
    "RBFit",
    "RBResult",
    "RBSequence",
    "Rotation",
    "arcsinc",
    "average_pulse_area",
    "clifford_group",
    "clifford_index",
    "compile_sequence",
    "compose",
    "expand",
    "fit_rb_decay",
    "infidelity",
    "inverse_table",
    "multiplication_table",
    "rb_decay",
    "rb_sequence",
    "rotation_error_infidelity",
    "rotation_unitary",
    "run_rb",
    "scrofulous",
]
