"""Qubit states, Pauli operators and the drive Hamiltonian."""

import math
from dataclasses import dataclass, field

import numpy as np
import numpy.typing as npt

from ..errors import InvalidArgumentError

ComplexArray = npt.NDArray[np.complex128]

NORM_TOLERANCE = 1e-9

IDENTITY: ComplexArray = np.eye(2, dtype=np.complex128)
SIGMA_X: ComplexArray = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y: ComplexArray = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z: ComplexArray = np.array([[1, 0], [0, -1]], dtype=np.complex128)


@dataclass(frozen=True)
class QubitState:
    """Normalized amplitude vector (c0, c1)."""

    amplitudes: ComplexArray

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.shape != (2,) or not np.all(np.isfinite(amps)):
            raise InvalidArgumentError("a qubit state needs two finite amplitudes")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOLERANCE:
            raise InvalidArgumentError(f"state norm {norm} differs from 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def ground(cls) -> "QubitState":
        return cls(np.array([1.0, 0.0], dtype=np.complex128))

    @classmethod
    def excited(cls) -> "QubitState":
        return cls(np.array([0.0, 1.0], dtype=np.complex128))

    @classmethod
    def normalized(cls, amplitudes: npt.ArrayLike) -> "QubitState":
        """Build a state after dividing out the norm."""
        amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
        norm = float(np.linalg.norm(amps))
        if norm == 0.0 or not math.isfinite(norm):
            raise InvalidArgumentError("cannot normalize a zero or non-finite vector")
        return cls(amps / norm)

    @property
    def p0(self) -> float:
        """Population of |0>."""
        return float(abs(self.amplitudes[0]) ** 2)

    @property
    def p1(self) -> float:
        return float(abs(self.amplitudes[1]) ** 2)


def fidelity(psi: QubitState, phi: QubitState) -> float:
    """Squared overlap |phi^dagger psi|^2, clipped to [0, 1]."""
    overlap = np.vdot(phi.amplitudes, psi.amplitudes)
    return float(min(1.0, max(0.0, abs(overlap) ** 2)))


def drive_axis(phase: float) -> ComplexArray:
    """cos(phase) sigma_x + sin(phase) sigma_y."""
    return math.cos(phase) * SIGMA_X + math.sin(phase) * SIGMA_Y


def hamiltonian(omega: float, delta: float, phase: float = 0.0) -> ComplexArray:
    """Single-site drive Hamiltonian 1/2 [Omega n.sigma + Delta (I - sigma_z)].

    Args:
        omega: Rabi frequency in rad/s.
        delta: Detuning in rad/s.
        phase: Drive axis angle in the xy plane (0 selects sigma_x).
    """
    if not (math.isfinite(omega) and math.isfinite(delta) and math.isfinite(phase)):
        raise InvalidArgumentError("hamiltonian inputs must be finite")
    return 0.5 * (omega * drive_axis(phase) + delta * (IDENTITY - SIGMA_Z))


@dataclass(frozen=True)
class NoiseOperatorSpec:
    """Noise operator S with S^dagger S = I (sigma_x unless a drive phase is set)."""

    operator: ComplexArray = field(default_factory=lambda: SIGMA_X.copy())

    def __post_init__(self) -> None:
        op = np.array(self.operator, dtype=np.complex128)
        if op.shape != (2, 2):
            raise InvalidArgumentError("noise operator must be 2x2")
        if not np.allclose(op.conj().T @ op, IDENTITY, atol=1e-12):
            raise InvalidArgumentError("noise operator must satisfy S^dagger S = I")
        op.setflags(write=False)
        object.__setattr__(self, "operator", op)

    def s0(self, state: QubitState) -> float:
        """Expectation phi0^dagger S phi0 of the noise operator in the initial state."""
        value = complex(np.vdot(state.amplitudes, self.operator @ state.amplitudes))
        if abs(value.imag) >= 1e-12:
            raise InvalidArgumentError(f"S0 has imaginary part {value.imag}")
        return float(min(1.0, max(-1.0, value.real)))
