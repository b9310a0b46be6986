"""Reference implementations the tests trust instead of the package's own code.

Everything here is deliberately naive: direct constraint evaluation,
exhaustive enumeration, dense matrices, scipy expm. Slow is fine at test
sizes (at most a few thousand basis states, matrices up to 32 x 32).
"""
from __future__ import annotations

import itertools

import numpy as np
from scipy.linalg import expm

from qmst.qubo import EdgeVar, OrderVar
from qmst.simulator import DriverKind


def reference_energy(bits, reg, g) -> float:
    """Energy of one assignment computed straight from the constraint sums.

    Reads variable meanings off the registry descriptors and evaluates the
    order-consistency, edge-direction, and single-parent penalties plus the
    tree cost without touching the package's coefficient expansion.
    """
    val = {d: int(b) for d, b in zip(reg.entries, bits)}
    root = g.root
    others = [v for v in range(g.num_vertices) if v != root]
    p = (g.num_vertices - 1) * g.max_cost + 1.0

    def x(u, v):
        return val[OrderVar(u, v)]

    def e(tail, head):
        return val.get(EdgeVar(tail, head), 0)

    order_pen = 0
    for u, v, w in itertools.combinations(others, 3):
        order_pen += x(u, w) + x(u, v) * x(v, w) - x(u, v) * x(u, w) - x(u, w) * x(v, w)

    direction_pen = 0
    for u, v in sorted(g.edge_pairs()):
        if root in (u, v):
            continue
        direction_pen += e(u, v) * (1 - x(u, v)) + e(v, u) * x(u, v)

    parent_pen = 0
    for v in others:
        incoming = sum(e(u, v) for u in range(g.num_vertices) if u != v)
        parent_pen += (1 - incoming) ** 2

    cost = 0.0
    for u, v in sorted(g.edge_pairs()):
        c = g.cost(u, v)
        if root in (u, v):
            cost += c * e(root, v if u == root else u)
        else:
            cost += c * (e(u, v) + e(v, u))

    return p * (order_pen + direction_pen + parent_pen) + cost


def _connected(n: int, pairs) -> bool:
    adj = {v: [] for v in range(n)}
    for u, v in pairs:
        adj[u].append(v)
        adj[v].append(u)
    seen, stack = {0}, [0]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == n


def spanning_trees(g):
    """Every spanning tree of the graph, as a tuple of canonical pairs."""
    pairs = sorted(g.edge_pairs())
    for combo in itertools.combinations(pairs, g.num_vertices - 1):
        if _connected(g.num_vertices, combo):
            yield combo


def brute_force_mst(g):
    """Cheapest spanning tree by full enumeration."""
    best, best_cost = None, float("inf")
    for tree in spanning_trees(g):
        cost = sum(g.cost(u, v) for u, v in tree)
        if cost < best_cost:
            best, best_cost = tree, cost
    return frozenset(best), best_cost


def tree_path(pairs, start: int, goal: int) -> list[tuple[int, int]]:
    """Edges along the unique tree path between two vertices."""
    adj: dict[int, list[int]] = {}
    for u, v in pairs:
        adj.setdefault(u, []).append(v)
        adj.setdefault(v, []).append(u)
    parent = {start: None}
    stack = [start]
    while stack:
        node = stack.pop()
        for nxt in adj.get(node, []):
            if nxt not in parent:
                parent[nxt] = node
                stack.append(nxt)
    path = []
    node = goal
    while parent[node] is not None:
        path.append((min(node, parent[node]), max(node, parent[node])))
        node = parent[node]
    return path


def linear_extensions(elements, constraints) -> int:
    """Count total orders of ``elements`` honoring (before, after) pairs."""
    elements = list(elements)
    if not elements:
        return 1
    total = 0
    for e in elements:
        blocked = any(b == e and a in elements for a, b in constraints)
        if not blocked:
            total += linear_extensions([x for x in elements if x != e], constraints)
    return total


X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def embedded(op: np.ndarray, qubit: int, n: int) -> np.ndarray:
    """Lift a single-qubit operator; basis bit q lives at kron slot n - 1 - q."""
    m = np.eye(1, dtype=complex)
    for slot in range(n):
        m = np.kron(m, op if slot == n - 1 - qubit else np.eye(2, dtype=complex))
    return m


def driver_matrix(term, n: int) -> np.ndarray:
    if term.kind is DriverKind.GLOBAL_X:
        return term.weight * sum(embedded(X, q, n) for q in range(n))
    base = X if term.kind is DriverKind.SINGLE_X else Y
    return term.weight * embedded(base, term.qubit, n)


def dense_unitary(h: np.ndarray, t: float) -> np.ndarray:
    return expm(-1j * t * np.asarray(h, dtype=complex))


def commutator_sandwich(amps: np.ndarray, drv: np.ndarray, energies: np.ndarray) -> complex:
    """<psi| i[drive, problem] |psi> via explicit dense matrices."""
    hp = np.diag(energies.astype(complex))
    comm = 1j * (drv @ hp - hp @ drv)
    return complex(np.conj(amps) @ comm @ amps)


def feedback_run(
    energies: np.ndarray,
    driver_mats,
    dt: float,
    n_layers: int,
    *,
    multi: bool,
    fdot_at=None,
):
    """Dense re-run of the feedback loop, matrix exponentials throughout.

    Mirrors the package's layer structure (problem phase, then drivers in
    list order, strengths from the previous state's commutator values) so
    the two implementations can be compared trace for trace. ``fdot_at``
    maps a layer index to the clock-stretch factor for rescaled runs.
    """
    dim = len(energies)
    amps = np.full(dim, dim ** -0.5, dtype=complex)
    hp = np.diag(energies.astype(complex))
    beta_log = np.empty((n_layers, len(driver_mats)))
    e_log = np.empty(n_layers)
    for k in range(1, n_layers + 1):
        a_vals = [commutator_sandwich(amps, m, energies).real for m in driver_mats]
        betas = [-a for a in a_vals] if multi else [-a_vals[0]]
        if fdot_at is not None:
            fd = fdot_at(k)
            betas = [b / fd for b in betas]
            step = fd * dt
        else:
            step = dt
        amps = expm(-1j * step * hp) @ amps
        for m, b in zip(driver_mats, betas):
            amps = expm(-1j * (b * step) * m) @ amps
        beta_log[k - 1] = betas
        e_log[k - 1] = float((np.conj(amps) @ (energies * amps)).real)
    return beta_log, e_log, amps
