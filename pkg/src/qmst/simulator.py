"""Statevector kernels for a diagonal problem operator plus X/Y drive terms.

Basis convention: amplitude index z stores variable i in bit i, so the
amplitude tensor reshaped to [2] * n exposes qubit i on axis n - 1 - i.
All kernels are dense numpy operations; the default size cap of 24 qubits
keeps the 2^n arrays within workstation memory.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .qubo import QuboModel

NORM_TOL = 1e-10


class DriverKind(Enum):
    GLOBAL_X = "global-x"
    SINGLE_X = "single-x"
    SINGLE_Y = "single-y"


@dataclass(frozen=True)
class DriverTerm:
    """One drive operator: a transverse-field sum or a single-qubit Pauli.

    The weight is an operator prefactor; rotation kernels and commutator
    expectations both scale with it.
    """

    kind: DriverKind
    qubit: int | None = None
    weight: float = 1.0

    def __post_init__(self) -> None:
        if self.weight <= 0:
            raise ValueError("driver weight must be positive")
        if self.kind is DriverKind.GLOBAL_X:
            if self.qubit is not None:
                raise ValueError("global drive takes no qubit index")
        elif self.qubit is None or self.qubit < 0:
            raise ValueError("single-qubit drive needs a qubit index")


@dataclass(frozen=True)
class DiagonalHamiltonian:
    """Problem operator stored as its 2^n diagonal energy table."""

    n_qubits: int
    energies: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.energies, dtype=np.float64)
        if arr.shape != (1 << self.n_qubits,):
            raise ValueError("energy table size must be 2**n_qubits")
        if not np.all(np.isfinite(arr)):
            raise ValueError("energies must be finite")
        object.__setattr__(self, "energies", arr)


@dataclass(frozen=True)
class StateVector:
    """Normalized complex amplitudes over the computational basis."""

    n_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        arr = np.asarray(self.amplitudes, dtype=np.complex128)
        if arr.shape != (1 << self.n_qubits,):
            raise ValueError("amplitude count must be 2**n_qubits")
        norm_sq = float(np.vdot(arr, arr).real)
        if abs(norm_sq - 1.0) > NORM_TOL:
            raise ValueError(f"state norm**2 = {norm_sq!r} is not 1 within {NORM_TOL}")
        object.__setattr__(self, "amplitudes", arr)


def diagonalize_qubo(model: QuboModel, *, max_qubits: int = 24) -> DiagonalHamiltonian:
    """Tabulate the QUBO energy of every basis state.

    Accumulation per entry follows the same term order as evaluate_qubo, so
    the two agree bit for bit.
    """
    n = model.n_vars
    if n > max_qubits:
        raise ValueError(f"{n} variables exceed the {max_qubits}-qubit simulator cap")
    dim = 1 << n
    z = np.arange(dim, dtype=np.uint32)
    energies = np.full(dim, model.constant, dtype=np.float64)
    for i, c in model.linear.items():
        energies[((z >> i) & 1).astype(bool)] += c
    for (i, j), c in model.quadratic.items():
        energies[((z >> i) & (z >> j) & 1).astype(bool)] += c
    return DiagonalHamiltonian(n, energies)


def ground_states(h: DiagonalHamiltonian, *, tol: float = 1e-9) -> tuple[float, np.ndarray]:
    """Minimum energy and the basis indices within tol of it."""
    e_min = float(h.energies.min())
    return e_min, np.flatnonzero(h.energies <= e_min + tol)


def _check_dims(state: StateVector, h: DiagonalHamiltonian) -> None:
    if state.n_qubits != h.n_qubits:
        raise ValueError("state and Hamiltonian qubit counts differ")


def apply_problem_phase(state: StateVector, h: DiagonalHamiltonian, theta: float) -> StateVector:
    """Multiply each amplitude by exp(-i * theta * energy)."""
    _check_dims(state, h)
    return StateVector(state.n_qubits, state.amplitudes * np.exp(-1j * theta * h.energies))


def _axis(n: int, qubit: int) -> int:
    return n - 1 - qubit


def _paired_slices(n: int, qubit: int) -> tuple[tuple, tuple]:
    lo: list = [slice(None)] * n
    hi: list = [slice(None)] * n
    lo[_axis(n, qubit)] = 0
    hi[_axis(n, qubit)] = 1
    return tuple(lo), tuple(hi)


def _rotate(amps: np.ndarray, n: int, qubit: int, m00, m01, m10, m11) -> np.ndarray:
    """Apply a 2x2 mixing matrix across the amplitude pairs of one qubit."""
    t = amps.reshape([2] * n)
    lo, hi = _paired_slices(n, qubit)
    a0, a1 = t[lo], t[hi]
    out = np.empty_like(t)
    out[lo] = m00 * a0 + m01 * a1
    out[hi] = m10 * a0 + m11 * a1
    return out.reshape(-1)


def _check_qubit(term: DriverTerm, n: int) -> None:
    if term.kind is not DriverKind.GLOBAL_X and term.qubit >= n:
        raise ValueError(f"driver qubit {term.qubit} out of range for {n} qubits")


def apply_driver(state: StateVector, term: DriverTerm, angle: float) -> StateVector:
    """Apply exp(-i * angle * drive operator) exactly.

    X rotations mix pairs by [[cos a, -i sin a], [-i sin a, cos a]] and Y
    rotations by [[cos a, -sin a], [sin a, cos a]], with a = weight * angle.
    The global drive factorizes into commuting single-qubit rotations, so
    applying them sequentially is exact.
    """
    n = state.n_qubits
    _check_qubit(term, n)
    a = term.weight * angle
    c, s = math.cos(a), math.sin(a)
    amps = state.amplitudes
    if term.kind is DriverKind.GLOBAL_X:
        for q in range(n):
            amps = _rotate(amps, n, q, c, -1j * s, -1j * s, c)
    elif term.kind is DriverKind.SINGLE_X:
        amps = _rotate(amps, n, term.qubit, c, -1j * s, -1j * s, c)
    else:
        amps = _rotate(amps, n, term.qubit, c, -s, s, c)
    return StateVector(n, amps)


def expected_energy(state: StateVector, h: DiagonalHamiltonian) -> float:
    """Probability-weighted mean of the energy table, always real."""
    _check_dims(state, h)
    probs = np.abs(state.amplitudes) ** 2
    return float(np.dot(probs, h.energies))


def _flipped(arr: np.ndarray, n: int, qubit: int) -> np.ndarray:
    return np.flip(arr.reshape([2] * n), axis=_axis(n, qubit)).reshape(-1)


def _y_times(arr: np.ndarray, n: int, qubit: int) -> np.ndarray:
    t = arr.reshape([2] * n)
    lo, hi = _paired_slices(n, qubit)
    out = np.empty_like(t)
    out[lo] = -1j * t[hi]
    out[hi] = 1j * t[lo]
    return out.reshape(-1)


def commutator_expectation(state: StateVector, term: DriverTerm, h: DiagonalHamiltonian) -> float:
    """Expectation of i[drive, problem] on the state; real by construction.

    Computed as -2 * Im <psi| drive (problem psi)>, using the drive's sparse
    bit-flip action instead of any dense matrix.
    """
    _check_dims(state, h)
    n = state.n_qubits
    _check_qubit(term, n)
    psi = state.amplitudes
    phi = h.energies * psi
    if term.kind is DriverKind.GLOBAL_X:
        inner = sum(np.vdot(psi, _flipped(phi, n, q)) for q in range(n))
    elif term.kind is DriverKind.SINGLE_X:
        inner = np.vdot(psi, _flipped(phi, n, term.qubit))
    else:
        inner = np.vdot(psi, _y_times(phi, n, term.qubit))
    return float(-2.0 * term.weight * inner.imag)
