"""Feedback-driven layered evolution protocols over a diagonal problem operator.

Each layer applies the problem phase, then every drive term, with drive
strengths set from the previous layer's commutator expectations so the
energy expectation descends. Four variants are exposed:

* one-drive: a single global transverse drive, strength -A;
* multi-drive: per-qubit drives, strength -w * shape(A) each;
* tr-one-drive / tr-multi-drive: the same laws on a rescaled clock, where a
  schedule derivative stretches each layer's unitaries and divides the
  feedback strength, front-loading progress into fewer layers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .simulator import (
    DiagonalHamiltonian,
    DriverKind,
    DriverTerm,
    StateVector,
    apply_driver,
    apply_problem_phase,
    commutator_expectation,
    expected_energy,
    ground_states,
)


class Variant(Enum):
    ONE_DRIVE = "one-drive"
    MULTI_DRIVE = "multi-drive"
    TR_ONE_DRIVE = "tr-one-drive"
    TR_MULTI_DRIVE = "tr-multi-drive"

    @property
    def time_rescaled(self) -> bool:
        return self in (Variant.TR_ONE_DRIVE, Variant.TR_MULTI_DRIVE)

    @property
    def multi_drive(self) -> bool:
        return self in (Variant.MULTI_DRIVE, Variant.TR_MULTI_DRIVE)


@dataclass(frozen=True)
class ControlShape:
    """Sign-preserving response applied to commutator values in the drive law.

    "identity" passes values through; "tanh" maps A to tanh(scale * A),
    bounding drive strengths on badly scaled instances.
    """

    kind: str = "identity"
    scale: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("identity", "tanh"):
            raise ValueError(f"unknown control shape {self.kind!r}")
        if self.scale <= 0:
            raise ValueError("shape scale must be positive")

    def __call__(self, a: float) -> float:
        if self.kind == "identity":
            return a
        return math.tanh(self.scale * a)

    @classmethod
    def parse(cls, text: str) -> "ControlShape":
        """Accepts "identity", "tanh", or "tanh:<scale>"."""
        if text == "identity":
            return cls()
        if text == "tanh":
            return cls("tanh")
        if text.startswith("tanh:"):
            return cls("tanh", float(text.split(":", 1)[1]))
        raise ValueError(f"unknown control shape {text!r}")

    def cli_string(self) -> str:
        return "identity" if self.kind == "identity" else f"tanh:{self.scale:g}"


IDENTITY_SHAPE = ControlShape()


def rescale_derivative(tau: float, a: float, t_f: float) -> float:
    """Clock-stretch factor a - (a - 1) * cos(2 pi a tau / t_f).

    Equals 1 at both ends of the rescaled window [0, t_f / a] and peaks at
    2a - 1 in the middle; a = 1 collapses it to the constant 1.
    """
    if a < 1.0:
        raise ValueError("rescale parameter a must be >= 1")
    if t_f <= 0.0:
        raise ValueError("t_f must be positive")
    tau_f = t_f / a
    tol = 1e-9 * max(1.0, tau_f)
    if tau < -tol or tau > tau_f + tol:
        raise ValueError(f"tau = {tau} outside the rescaled window [0, {tau_f}]")
    return a - (a - 1.0) * math.cos(2.0 * math.pi * a * tau / t_f)


def tr_layer_count(dt: float, a: float, t_f: float) -> int:
    """Layers that fit the rescaled window: floor((t_f / a) / dt).

    A 1e-9 slack absorbs float division landing just under an integer.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if a < 1.0:
        raise ValueError("rescale parameter a must be >= 1")
    if t_f <= 0:
        raise ValueError("t_f must be positive")
    return int(math.floor((t_f / a) / dt + 1e-9))


@dataclass(frozen=True)
class ProtocolConfig:
    """Run parameters: variant, step size, layer count, and optional extras."""

    variant: Variant
    dt: float
    num_layers: int
    tr_a: float | None = None
    tr_tf: float | None = None
    control_shape: ControlShape = field(default_factory=ControlShape)
    driver_weights: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.num_layers < 1:
            raise ValueError("need at least one layer")
        if self.variant.time_rescaled:
            if self.tr_a is None or self.tr_tf is None:
                raise ValueError("time-rescaled variants need tr_a and tr_tf")
            if self.tr_a < 1.0:
                raise ValueError("tr_a must be >= 1")
            if self.tr_tf <= 0:
                raise ValueError("tr_tf must be positive")
            tau_f = self.tr_tf / self.tr_a
            if self.num_layers * self.dt > tau_f + 1e-9 * max(1.0, tau_f):
                raise ValueError(
                    f"{self.num_layers} layers of dt = {self.dt} overrun the "
                    f"rescaled window {tau_f}"
                )
        if self.driver_weights is not None:
            if any(w <= 0 for w in self.driver_weights):
                raise ValueError("driver weights must be positive")


@dataclass(frozen=True)
class RunTrace:
    """Per-layer record of a protocol run plus the final state.

    Arrays are indexed by layer (row k is layer k + 1); beta and A columns
    follow the driver list order.
    """

    variant: Variant
    layers: np.ndarray
    a_values: np.ndarray
    betas: np.ndarray
    energies: np.ndarray
    initial_energy: float
    final_state: StateVector

    @property
    def n_drivers(self) -> int:
        return self.betas.shape[1]

    @property
    def final_energy(self) -> float:
        return float(self.energies[-1])


def initial_state(n_qubits: int) -> StateVector:
    """Uniform superposition, every amplitude 2**(-n/2)."""
    if n_qubits < 1:
        raise ValueError("need at least one qubit")
    dim = 1 << n_qubits
    return StateVector(n_qubits, np.full(dim, dim ** -0.5, dtype=np.complex128))


def make_drivers(
    n_qubits: int, variant: Variant, *, include_y: bool = False
) -> tuple[DriverTerm, ...]:
    """Default drive set: one global X drive, or per-qubit X (plus optional Y)."""
    if not variant.multi_drive:
        return (DriverTerm(DriverKind.GLOBAL_X),)
    terms = [DriverTerm(DriverKind.SINGLE_X, q) for q in range(n_qubits)]
    if include_y:
        terms.extend(DriverTerm(DriverKind.SINGLE_Y, q) for q in range(n_qubits))
    return tuple(terms)


def run_protocol(
    h: DiagonalHamiltonian,
    drivers: tuple[DriverTerm, ...] | list[DriverTerm],
    cfg: ProtocolConfig,
) -> RunTrace:
    """Run the feedback protocol from the uniform state and record every layer.

    Layer k measures each drive's commutator expectation on the incoming
    state, sets the drive strengths by the variant's law, applies the problem
    phase and then every drive in list order, and records strengths,
    commutator values, and the post-layer energy expectation. Deterministic:
    no randomness enters anywhere.
    """
    drivers = tuple(drivers)
    if not drivers:
        raise ValueError("need at least one driver")
    if not cfg.variant.multi_drive and len(drivers) != 1:
        raise ValueError("one-drive variants take exactly one driver")
    weights = cfg.driver_weights
    if weights is None:
        weights = (1.0,) * len(drivers)
    elif len(weights) != len(drivers):
        raise ValueError("driver_weights length must match the driver list")

    state = initial_state(h.n_qubits)
    j0 = expected_energy(state, h)
    n_layers = cfg.num_layers
    a_log = np.empty((n_layers, len(drivers)))
    b_log = np.empty((n_layers, len(drivers)))
    e_log = np.empty(n_layers)

    for k in range(1, n_layers + 1):
        a_vals = [commutator_expectation(state, d, h) for d in drivers]
        if cfg.variant.multi_drive:
            betas = [-(w * cfg.control_shape(a)) + 0.0 for w, a in zip(weights, a_vals)]
        else:
            betas = [-a_vals[0] + 0.0]
        if cfg.variant.time_rescaled:
            fdot = rescale_derivative(k * cfg.dt, cfg.tr_a, cfg.tr_tf)
            betas = [b / fdot for b in betas]
            step = fdot * cfg.dt
        else:
            step = cfg.dt
        state = apply_problem_phase(state, h, step)
        for d, b in zip(drivers, betas):
            state = apply_driver(state, d, b * step)
        row = k - 1
        a_log[row] = a_vals
        b_log[row] = betas
        e_log[row] = expected_energy(state, h)

    return RunTrace(
        variant=cfg.variant,
        layers=np.arange(1, n_layers + 1),
        a_values=a_log,
        betas=b_log,
        energies=e_log,
        initial_energy=j0,
        final_state=state,
    )


def ground_probability(state: StateVector, h: DiagonalHamiltonian) -> float:
    """Total probability the state assigns to the minimum-energy manifold."""
    _, idx = ground_states(h)
    probs = np.abs(state.amplitudes[idx]) ** 2
    return float(probs.sum())
