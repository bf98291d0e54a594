"""Exact m-qubit state vectors, single-qubit gates and the structured entangler.

Basis indices read qubit 1 as the most significant bit, so the label
y = (j1, j2, ..., jm) in binary addresses amplitude ``amps[y]``.  All values
are immutable; every operation returns a fresh, validated state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

NORM_TOL = 1e-12
UNITARY_TOL = 1e-12

_SQRT2_INV = 1.0 / math.sqrt(2.0)


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.array(arr, dtype=complex, copy=True)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class Gate:
    """A 2x2 unitary acting on a single qubit."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (2, 2):
            raise ValueError(f"gate must be 2x2, got shape {mat.shape}")
        if not np.all(np.isfinite(mat.view(np.float64))):
            raise ValueError("gate entries must be finite")
        defect = np.max(np.abs(mat @ mat.conj().T - np.eye(2)))
        if defect > UNITARY_TOL:
            raise ValueError(f"gate is not unitary (defect {defect:.3e})")
        object.__setattr__(self, "matrix", _frozen(mat))

    def dagger(self) -> "Gate":
        return Gate(self.matrix.conj().T)


IDENTITY_GATE = Gate(np.eye(2))


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitudes over the 2^m computational basis states."""

    m: int
    amps: np.ndarray

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m < 1:
            raise ValueError(f"qubit count must be an integer >= 1, got {self.m}")
        amps = np.asarray(self.amps, dtype=complex)
        dim = 1 << self.m
        if amps.shape != (dim,):
            raise ValueError(f"expected {dim} amplitudes, got shape {amps.shape}")
        if not np.all(np.isfinite(amps.view(np.float64))):
            raise ValueError("amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} is not 1 within {NORM_TOL}")
        object.__setattr__(self, "amps", _frozen(amps))

    @cached_property
    def probabilities(self) -> np.ndarray:
        probs = np.abs(self.amps) ** 2
        probs.flags.writeable = False
        return probs

    def probability(self, y: int) -> float:
        """Born-rule probability of measuring basis state y."""
        _check_basis_index(y, self.m)
        return float(self.probabilities[y])


def basis_state(m: int, y: int = 0) -> StateVector:
    """The computational basis state |y> on m qubits."""
    _check_basis_index(y, m)
    amps = np.zeros(1 << m, dtype=complex)
    amps[y] = 1.0
    return StateVector(m, amps)


def _check_basis_index(y: int, m: int) -> None:
    if not isinstance(m, int) or m < 1:
        raise ValueError(f"qubit count must be an integer >= 1, got {m}")
    if not isinstance(y, int) or not 0 <= y < (1 << m):
        raise ValueError(f"basis index {y} out of range for {m} qubits")


def apply_single_qubit_gate(state: StateVector, qubit_index: int, gate: Gate) -> StateVector:
    """Apply a 2x2 gate to one qubit (1-based index, qubit 1 = most significant bit)."""
    if not 1 <= qubit_index <= state.m:
        raise ValueError(f"qubit index {qubit_index} out of range 1..{state.m}")
    left = 1 << (qubit_index - 1)
    right = 1 << (state.m - qubit_index)
    block = state.amps.reshape(left, 2, right)
    new = np.einsum("ab,lbr->lar", gate.matrix, block).reshape(-1)
    return StateVector(state.m, new)


def apply_entangler(state: StateVector, dagger: bool = False) -> StateVector:
    """Apply J = (I + i X^m)/sqrt(2) (or its adjoint) without forming a matrix.

    X^m reverses the amplitude array because flipping every bit maps index y
    to 2^m - 1 - y, so J acts as one axpy on the reversed amplitudes.
    """
    sign = -1j if dagger else 1j
    new = (state.amps + sign * state.amps[::-1]) * _SQRT2_INV
    return StateVector(state.m, new)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b> with conjugation on the first argument."""
    if a.m != b.m:
        raise ValueError(f"qubit count mismatch: {a.m} vs {b.m}")
    return complex(np.vdot(a.amps, b.amps))


def hamming_weight(y: int, m: int) -> int:
    """Number of 1-bits in the m-bit representation of y."""
    _check_basis_index(y, m)
    return y.bit_count()


def bit_complement(y: int, m: int) -> int:
    """y with all m bits flipped."""
    _check_basis_index(y, m)
    return ((1 << m) - 1) ^ y
