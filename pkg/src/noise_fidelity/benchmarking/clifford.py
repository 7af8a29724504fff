"""Single-qubit Clifford group built from x/y rotations."""

import functools
import itertools
import math
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from ..dynamics.states import IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z, ComplexArray
from ..errors import InvalidArgumentError

GROUP_ORDER = 24
MAX_WORD_LENGTH = 3
PHASE_TOLERANCE = 1e-8

_AXES = {0: "x", 1: "y", 2: "-x", 3: "-y"}


@dataclass(frozen=True)
class Rotation:
    """Rotation by ``angle`` about the equatorial axis at azimuth ``phase``."""

    angle: float
    phase: float = 0.0

    @property
    def axis(self) -> str | None:
        """'x', 'y', '-x' or '-y' for quarter-turn phases, otherwise None."""
        quarter = self.phase / (math.pi / 2)
        k = round(quarter)
        if abs(quarter - k) > 1e-12:
            return None
        return _AXES[k % 4]

    def unitary(self) -> ComplexArray:
        return rotation_unitary(self.angle, self.phase)


def rotation_unitary(angle: float, phase: float = 0.0) -> ComplexArray:
    """exp(-i angle/2 (cos(phase) sigma_x + sin(phase) sigma_y))."""
    axis = math.cos(phase) * SIGMA_X + math.sin(phase) * SIGMA_Y
    return math.cos(angle / 2) * IDENTITY - 1j * math.sin(angle / 2) * axis


def compose(rotations: Iterable[Rotation]) -> ComplexArray:
    """Unitary of a rotation sequence; the first rotation acts first."""
    u = IDENTITY.copy()
    for rotation in rotations:
        u = rotation.unitary() @ u
    return u


def infidelity(target: ComplexArray, actual: ComplexArray) -> float:
    """Gate infidelity 1 - |tr(target^dagger actual)/2|^2.

    Evaluated through the Pauli components of target^dagger actual, which keeps
    full relative precision for nearly identical unitaries.
    """
    a = target.conj().T @ actual
    return float(sum(abs(np.trace(a @ p) / 2) ** 2 for p in (SIGMA_X, SIGMA_Y, SIGMA_Z)))


def same_up_to_phase(u: ComplexArray, v: ComplexArray, atol: float = PHASE_TOLERANCE) -> bool:
    return infidelity(u, v) < atol


@dataclass(frozen=True)
class CliffordGate:
    """One Clifford element with its primitive-rotation decomposition."""

    index: int
    unitary: ComplexArray
    decomposition: tuple[Rotation, ...]

    @property
    def pulse_area(self) -> float:
        return sum(r.angle for r in self.decomposition)


PRIMITIVES: tuple[Rotation, ...] = (
    Rotation(math.pi / 2, 0.0),
    Rotation(math.pi / 2, math.pi),
    Rotation(math.pi, 0.0),
    Rotation(math.pi / 2, math.pi / 2),
    Rotation(math.pi / 2, 3 * math.pi / 2),
    Rotation(math.pi, math.pi / 2),
)


@functools.cache
def clifford_group() -> tuple[CliffordGate, ...]:
    """The 24 single-qubit Cliffords, each with a minimal-area x/y decomposition.

    Words over {+-X/2, X, +-Y/2, Y} of up to three rotations are visited in
    order of total rotation angle, then length; each new element (up to global
    phase) keeps the first word that reaches it. Index 0 is the identity with an
    empty decomposition.
    """
    words = [
        word
        for length in range(MAX_WORD_LENGTH + 1)
        for word in itertools.product(range(len(PRIMITIVES)), repeat=length)
    ]
    words.sort(key=lambda w: (sum(PRIMITIVES[i].angle for i in w), len(w), w))

    gates: list[CliffordGate] = []
    for word in words:
        rotations = tuple(PRIMITIVES[i] for i in word)
        u = compose(rotations)
        if any(same_up_to_phase(g.unitary, u) for g in gates):
            continue
        gates.append(CliffordGate(index=len(gates), unitary=u, decomposition=rotations))
        if len(gates) == GROUP_ORDER:
            break
    if len(gates) != GROUP_ORDER:
        raise RuntimeError(f"only {len(gates)} Clifford elements reachable")
    return tuple(gates)


def clifford_index(u: ComplexArray) -> int:
    """Index of the Clifford equal to ``u`` up to global phase."""
    for gate in clifford_group():
        if same_up_to_phase(gate.unitary, u):
            return gate.index
    raise InvalidArgumentError("unitary is not a Clifford element")


@functools.cache
def multiplication_table() -> tuple[tuple[int, ...], ...]:
    """table[a][b] is the index of 'apply a, then b'."""
    group = clifford_group()
    return tuple(
        tuple(clifford_index(b.unitary @ a.unitary) for b in group) for a in group
    )


@functools.cache
def inverse_table() -> tuple[int, ...]:
    table = multiplication_table()
    return tuple(row.index(0) for row in table)
