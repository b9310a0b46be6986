"""QUBO encoding of the rooted minimum-spanning-tree problem, and its decoder.

Variables come in two families. Edge variables pick directed tree edges:
every edge touching the root gets a single root-outward variable, every
other edge gets one variable per direction. Order variables, one per
unordered pair of non-root vertices, encode a vertex ordering (value 1 means
the lower-indexed vertex comes first) whose job is to rule out cycles.

The energy stacks three penalty blocks on top of the tree-cost objective:

* order consistency, one unit per vertex triple whose three order bits are
  intransitive;
* edge/order agreement, one unit per non-root edge selected against the
  direction the ordering allows;
* single-parent connectivity, the squared deviation of each non-root
  vertex's incoming-edge count from one.

Penalty blocks carry weight (num_vertices - 1) * max_cost + 1, one more than
any spanning tree can cost, so every constraint violation is dearer than the
worst feasible tree and the ground manifold consists exactly of minimum
spanning trees paired with orderings consistent with them.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Sequence, Union

from .graphs import WeightedGraph, canonical_edge


@dataclass(frozen=True)
class EdgeVar:
    """Binary variable selecting the directed edge tail -> head."""

    tail: int
    head: int

    def __str__(self) -> str:
        return f"edge:{self.tail}->{self.head}"


@dataclass(frozen=True)
class OrderVar:
    """Binary variable, 1 when vertex ``low`` precedes vertex ``high``."""

    low: int
    high: int

    def __post_init__(self) -> None:
        if self.low >= self.high:
            raise ValueError("order variable expects low < high")

    def __str__(self) -> str:
        return f"order:{self.low}<{self.high}"


Descriptor = Union[EdgeVar, OrderVar]


@dataclass(frozen=True)
class VariableRegistry:
    """Canonically ordered list of QUBO variables for one graph.

    Layout: root-incident edge variables first (by neighbor), then both
    directions of every non-root edge (by canonical pair, low-to-high tail
    first), then order variables in lexicographic pair order. Qubit i of any
    basis state downstream corresponds to entries[i].
    """

    entries: tuple[Descriptor, ...]

    @cached_property
    def index_of(self) -> dict[Descriptor, int]:
        return {d: i for i, d in enumerate(self.entries)}

    @property
    def n_vars(self) -> int:
        return len(self.entries)

    def edge_index(self, tail: int, head: int) -> int:
        return self.index_of[EdgeVar(tail, head)]

    def order_index(self, u: int, v: int) -> int:
        return self.index_of[OrderVar(*canonical_edge(u, v))]

    def incoming_edge_vars(self, head: int) -> list[int]:
        return [
            i
            for i, d in enumerate(self.entries)
            if isinstance(d, EdgeVar) and d.head == head
        ]

    def descriptor_strings(self) -> list[str]:
        return [str(d) for d in self.entries]


def build_variable_registry(g: WeightedGraph) -> VariableRegistry:
    """Lay out edge and order variables for the graph in canonical order."""
    root = g.root
    pairs = sorted(g.edge_pairs())
    entries: list[Descriptor] = []
    for u, v in pairs:
        if root in (u, v):
            entries.append(EdgeVar(root, v if u == root else u))
    for u, v in pairs:
        if root not in (u, v):
            entries.append(EdgeVar(u, v))
            entries.append(EdgeVar(v, u))
    others = [v for v in range(g.num_vertices) if v != root]
    for u, v in combinations(others, 2):
        entries.append(OrderVar(u, v))
    return VariableRegistry(tuple(entries))


def penalty_weight(g: WeightedGraph) -> float:
    """Constraint weight exceeding the cost of any spanning tree."""
    return (g.num_vertices - 1) * g.max_cost + 1.0


@dataclass(frozen=True)
class QuboModel:
    """Quadratic pseudo-boolean energy: constant + linear + pairwise terms.

    Quadratic keys are (i, j) with i < j. Treat instances as immutable once
    built.
    """

    n_vars: int
    linear: dict[int, float]
    quadratic: dict[tuple[int, int], float]
    constant: float


def build_mst_qubo(g: WeightedGraph) -> tuple[QuboModel, VariableRegistry]:
    """Expand the spanning-tree energy into an explicit QUBO.

    Returns the model together with the registry that maps its variable
    indices back to edge and order descriptors.
    """
    reg = build_variable_registry(g)
    p = penalty_weight(g)
    linear: dict[int, float] = {}
    quad: dict[tuple[int, int], float] = {}
    constant = 0.0

    def add(i: int, c: float) -> None:
        linear[i] = linear.get(i, 0.0) + c

    def add_pair(i: int, j: int, c: float) -> None:
        if i == j:
            add(i, c)  # b*b == b for binaries
            return
        key = (i, j) if i < j else (j, i)
        quad[key] = quad.get(key, 0.0) + c

    root = g.root
    others = [v for v in range(g.num_vertices) if v != root]
    nonroot_edges = [e for e in sorted(g.edge_pairs()) if root not in e]

    # Order consistency: x_uw + x_uv*x_vw - x_uv*x_uw - x_uw*x_vw is 1 on the
    # two intransitive triple assignments and 0 on the six consistent ones.
    for u, v, w in combinations(others, 3):
        x_uv = reg.order_index(u, v)
        x_vw = reg.order_index(v, w)
        x_uw = reg.order_index(u, w)
        add(x_uw, p)
        add_pair(x_uv, x_vw, p)
        add_pair(x_uv, x_uw, -p)
        add_pair(x_uw, x_vw, -p)

    # Edge/order agreement: a directed edge may only run from an earlier
    # vertex to a later one.
    for u, v in nonroot_edges:
        x = reg.order_index(u, v)
        add(reg.edge_index(u, v), p)
        add_pair(reg.edge_index(u, v), x, -p)
        add_pair(reg.edge_index(v, u), x, p)

    # Single parent per non-root vertex: expand (1 - sum_in)^2 using b^2 == b.
    for v in others:
        incoming = reg.incoming_edge_vars(v)
        constant += p
        for i in incoming:
            add(i, -p)
        for i, j in combinations(incoming, 2):
            add_pair(i, j, 2.0 * p)

    # Tree cost objective.
    for u, v in sorted(g.edge_pairs()):
        c = g.cost(u, v)
        if root in (u, v):
            add(reg.edge_index(root, v if u == root else u), c)
        else:
            add(reg.edge_index(u, v), c)
            add(reg.edge_index(v, u), c)

    linear = {i: c for i, c in linear.items() if c != 0.0}
    quad = {k: c for k, c in quad.items() if c != 0.0}
    return QuboModel(reg.n_vars, linear, quad, constant), reg


def evaluate_qubo(model: QuboModel, bits: Sequence[int]) -> float:
    """Energy of one assignment, accumulated term by term."""
    if len(bits) != model.n_vars:
        raise ValueError(f"expected {model.n_vars} bits, got {len(bits)}")
    energy = model.constant
    for i, c in model.linear.items():
        if bits[i]:
            energy += c
    for (i, j), c in model.quadratic.items():
        if bits[i] and bits[j]:
            energy += c
    return energy


@dataclass(frozen=True)
class ViolationReport:
    """Counts of violated constraints, one count per penalty family."""

    order: int
    edge_order: int
    connectivity: int

    @property
    def clean(self) -> bool:
        return self.order == 0 and self.edge_order == 0 and self.connectivity == 0


@dataclass(frozen=True)
class DecodedSolution:
    directed_edges: frozenset[tuple[int, int]]
    order_relation: frozenset[tuple[int, int]]
    undirected_edge_set: frozenset[tuple[int, int]]
    violations: ViolationReport


def decode(bits: Sequence[int], reg: VariableRegistry, g: WeightedGraph) -> DecodedSolution:
    """Read an assignment back into edges, an ordering, and violation counts.

    Violations count the offending triples, edges, and vertices rather than
    summed penalty magnitudes.
    """
    if len(bits) != reg.n_vars:
        raise ValueError(f"expected {reg.n_vars} bits, got {len(bits)}")
    edge_bit: dict[tuple[int, int], int] = {}
    precedes: dict[tuple[int, int], int] = {}
    for d, b in zip(reg.entries, bits):
        if isinstance(d, EdgeVar):
            edge_bit[(d.tail, d.head)] = int(bool(b))
        else:
            precedes[(d.low, d.high)] = int(bool(b))

    directed = frozenset(pair for pair, b in edge_bit.items() if b)
    order_rel = frozenset(
        (lo, hi) if b else (hi, lo) for (lo, hi), b in precedes.items()
    )
    undirected = frozenset(canonical_edge(t, h) for t, h in directed)

    others = [v for v in range(g.num_vertices) if v != g.root]
    order_bad = 0
    for u, v, w in combinations(others, 3):
        a, b, c = precedes[(u, v)], precedes[(v, w)], precedes[(u, w)]
        order_bad += c + a * b - a * c - c * b

    edge_bad = 0
    for u, v in sorted(g.edge_pairs()):
        if g.root in (u, v):
            continue
        x = precedes[(u, v)]
        if edge_bit[(u, v)] * (1 - x) + edge_bit[(v, u)] * x:
            edge_bad += 1

    conn_bad = sum(
        1
        for v in others
        if sum(edge_bit[(t, h)] for (t, h) in edge_bit if h == v) != 1
    )

    return DecodedSolution(
        directed_edges=directed,
        order_relation=order_rel,
        undirected_edge_set=undirected,
        violations=ViolationReport(order_bad, edge_bad, conn_bad),
    )


def qubo_to_json(model: QuboModel, reg: VariableRegistry) -> dict:
    """Serializable form of a model, for cross-checks outside this package."""
    return {
        "n_vars": model.n_vars,
        "constant": model.constant,
        "linear": {str(i): c for i, c in sorted(model.linear.items())},
        "quadratic": {f"{i},{j}": c for (i, j), c in sorted(model.quadratic.items())},
        "registry": reg.descriptor_strings(),
    }


def index_to_bits(z: int, n: int) -> tuple[int, ...]:
    """Bit i of the basis index is variable i's value."""
    return tuple((z >> i) & 1 for i in range(n))


def bits_to_index(bits: Sequence[int]) -> int:
    return sum(1 << i for i, b in enumerate(bits) if b)


def bits_to_string(bits: Sequence[int]) -> str:
    """Render with variable 0 leftmost, matching registry order."""
    return "".join("1" if b else "0" for b in bits)
