"""Experiment orchestration: problem preparation, runs, and report files.

Output conventions: CSV floats carry 17 significant digits so values
round-trip exactly; distribution bitstrings list variable 0 first, matching
registry order; ranks are 1-based over the full probability-sorted basis.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .graphs import WeightedGraph, kruskal_mst
from .protocols import (
    ControlShape,
    ProtocolConfig,
    RunTrace,
    Variant,
    ground_probability,
    make_drivers,
    run_protocol,
    tr_layer_count,
)
from .qubo import (
    QuboModel,
    VariableRegistry,
    bits_to_string,
    build_mst_qubo,
    decode,
    index_to_bits,
    penalty_weight,
)
from .simulator import DiagonalHamiltonian, DriverTerm, diagonalize_qubo, ground_states

ENERGY_MATCH_TOL = 1e-9


def f17(x: float) -> str:
    """17 significant digits, enough for an exact float round-trip."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class Problem:
    """A graph with its encoding, energy table, and classical baseline."""

    graph: WeightedGraph
    registry: VariableRegistry
    model: QuboModel
    hamiltonian: DiagonalHamiltonian
    penalty: float
    mst_edges: frozenset[tuple[int, int]]
    mst_cost: float
    e_min: float
    ground_indices: np.ndarray
    encoding_sound: bool


def decodes_to_mst(z: int, problem: "Problem") -> bool:
    """True when basis index z reads back as exactly the minimum tree."""
    return _reads_as_tree(z, problem.registry, problem.graph, problem.mst_edges)


def _reads_as_tree(z, reg, graph, tree_edges) -> bool:
    sol = decode(index_to_bits(int(z), reg.n_vars), reg, graph)
    return sol.violations.clean and sol.undirected_edge_set == tree_edges


def prepare_problem(graph: WeightedGraph, *, max_qubits: int = 24) -> Problem:
    """Build the QUBO, tabulate energies, and cross-check against Kruskal."""
    model, reg = build_mst_qubo(graph)
    h = diagonalize_qubo(model, max_qubits=max_qubits)
    mst_edges, mst_cost = kruskal_mst(graph)
    e_min, ground = ground_states(h)
    sound = abs(e_min - mst_cost) <= ENERGY_MATCH_TOL and all(
        _reads_as_tree(z, reg, graph, mst_edges) for z in ground
    )
    return Problem(
        graph=graph,
        registry=reg,
        model=model,
        hamiltonian=h,
        penalty=penalty_weight(graph),
        mst_edges=mst_edges,
        mst_cost=mst_cost,
        e_min=e_min,
        ground_indices=ground,
        encoding_sound=sound,
    )


@dataclass(frozen=True)
class DistributionRow:
    bitstring: str
    probability: float
    energy: float
    decodes_to_mst: bool
    order_violations: int
    edge_order_violations: int
    connectivity_violations: int


@dataclass(frozen=True)
class VariantOutcome:
    """One protocol run with its distribution summary."""

    config: ProtocolConfig
    drivers: tuple[DriverTerm, ...]
    trace: RunTrace
    ground_probability: float
    mst_rank: int
    top_rows: tuple[DistributionRow, ...]


def build_protocol_config(
    variant: Variant,
    *,
    dt: float = 0.02,
    layers: int = 500,
    tr_a: float = 2.0,
    tr_tf: float | None = None,
    shape: ControlShape | None = None,
) -> ProtocolConfig:
    """Resolve a layer budget into a concrete config.

    Time-rescaled variants default the total time to layers * dt and then run
    only as many layers as the compressed window holds, never more than the
    requested budget.
    """
    shape = shape or ControlShape()
    if variant.time_rescaled:
        t_f = layers * dt if tr_tf is None else tr_tf
        n_layers = min(layers, tr_layer_count(dt, tr_a, t_f))
        if n_layers < 1:
            raise ValueError("rescaled window too short for a single layer")
        return ProtocolConfig(
            variant, dt, n_layers, tr_a=tr_a, tr_tf=t_f, control_shape=shape
        )
    return ProtocolConfig(variant, dt, layers, control_shape=shape)


def run_variant(
    problem: Problem,
    cfg: ProtocolConfig,
    *,
    include_y: bool = False,
    top_n: int = 20,
) -> VariantOutcome:
    """Run one variant and derive its distribution table and MST rank."""
    if top_n < 1:
        raise ValueError("top_n must be at least 1")
    h = problem.hamiltonian
    drivers = make_drivers(h.n_qubits, cfg.variant, include_y=include_y)
    trace = run_protocol(h, drivers, cfg)

    probs = np.abs(trace.final_state.amplitudes) ** 2
    order = np.argsort(-probs, kind="stable")
    position = np.empty_like(order)
    position[order] = np.arange(order.size)

    mst_states = [int(z) for z in problem.ground_indices if decodes_to_mst(int(z), problem)]
    if mst_states:
        rank = 1 + int(position[mst_states].min())
    else:
        # Unsound encodings only; scan everything rather than guess.
        rank = next(
            (1 + i for i, z in enumerate(order) if decodes_to_mst(int(z), problem)),
            0,
        )

    n = problem.registry.n_vars
    rows = []
    for z in order[: min(top_n, order.size)]:
        z = int(z)
        bits = index_to_bits(z, n)
        sol = decode(bits, problem.registry, problem.graph)
        rows.append(
            DistributionRow(
                bitstring=bits_to_string(bits),
                probability=float(probs[z]),
                energy=float(h.energies[z]),
                decodes_to_mst=sol.violations.clean
                and sol.undirected_edge_set == problem.mst_edges,
                order_violations=sol.violations.order,
                edge_order_violations=sol.violations.edge_order,
                connectivity_violations=sol.violations.connectivity,
            )
        )

    return VariantOutcome(
        config=cfg,
        drivers=drivers,
        trace=trace,
        ground_probability=ground_probability(trace.final_state, h),
        mst_rank=rank,
        top_rows=tuple(rows),
    )


def write_convergence_csv(path, trace: RunTrace) -> None:
    """Columns: layer, energy, beta per driver, commutator value per driver."""
    n_drv = trace.n_drivers
    header = (
        ["layer", "energy"]
        + [f"beta_{j}" for j in range(n_drv)]
        + [f"a_{j}" for j in range(n_drv)]
    )
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in range(trace.layers.size):
            writer.writerow(
                [int(trace.layers[row]), f17(trace.energies[row])]
                + [f17(b) for b in trace.betas[row]]
                + [f17(a) for a in trace.a_values[row]]
            )


def write_distribution_csv(path, rows) -> None:
    header = [
        "bitstring",
        "probability",
        "energy",
        "decodes_to_mst",
        "order_violations",
        "edge_order_violations",
        "connectivity_violations",
    ]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in rows:
            writer.writerow(
                [
                    r.bitstring,
                    f17(r.probability),
                    f17(r.energy),
                    str(r.decodes_to_mst).lower(),
                    r.order_violations,
                    r.edge_order_violations,
                    r.connectivity_violations,
                ]
            )


def write_merged_convergence_csv(path, outcomes: dict[str, VariantOutcome]) -> None:
    """One energy column per variant; shorter runs leave trailing cells empty."""
    names = list(outcomes)
    max_layers = max(o.trace.layers.size for o in outcomes.values())
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["layer"] + [f"energy_{name}" for name in names])
        for row in range(max_layers):
            cells: list[str] = [str(row + 1)]
            for name in names:
                trace = outcomes[name].trace
                cells.append(f17(trace.energies[row]) if row < trace.layers.size else "")
            writer.writerow(cells)


def config_echo(cfg: ProtocolConfig, *, top_n: int, include_y: bool) -> dict:
    return {
        "variant": cfg.variant.value,
        "dt": cfg.dt,
        "layers": cfg.num_layers,
        "tr_a": cfg.tr_a,
        "tr_tf": cfg.tr_tf,
        "shape": cfg.control_shape.cli_string(),
        "top_n": top_n,
        "drivers": "xy" if include_y else "x",
    }


def problem_echo(problem: Problem, graph_path: str | None) -> dict:
    return {
        "graph": graph_path,
        "num_vertices": problem.graph.num_vertices,
        "root": problem.graph.root,
        "n_qubits": problem.registry.n_vars,
        "penalty": problem.penalty,
        "mst_cost": problem.mst_cost,
        "e_min": problem.e_min,
        "ground_state_count": int(problem.ground_indices.size),
        "encoding_sound": problem.encoding_sound,
    }


def summary_dict(
    problem: Problem,
    outcome: VariantOutcome,
    *,
    graph_path: str | None,
    top_n: int,
    include_y: bool,
) -> dict:
    return {
        "config": config_echo(outcome.config, top_n=top_n, include_y=include_y),
        "problem": problem_echo(problem, graph_path),
        "initial_energy": outcome.trace.initial_energy,
        "final_energy": outcome.trace.final_energy,
        "ground_probability": outcome.ground_probability,
        "mst_rank": outcome.mst_rank,
    }


def report_dict(
    problem: Problem,
    outcomes: dict[str, VariantOutcome],
    *,
    graph_path: str | None,
    top_n: int,
    include_y: bool,
    file_refs: dict[str, dict[str, str]],
) -> dict:
    """Cross-variant report over one shared instance and budget."""
    variants = {}
    for name, outcome in outcomes.items():
        variants[name] = {
            "config": config_echo(outcome.config, top_n=top_n, include_y=include_y),
            "initial_energy": outcome.trace.initial_energy,
            "final_energy": outcome.trace.final_energy,
            "ground_probability": outcome.ground_probability,
            "mst_rank": outcome.mst_rank,
            "files": file_refs.get(name, {}),
        }
    return {"problem": problem_echo(problem, graph_path), "variants": variants}


def write_json(path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")
