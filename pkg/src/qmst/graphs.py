"""Weighted graphs, seeded random instances, and the classical MST baseline."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from pathlib import Path


def canonical_edge(u: int, v: int) -> tuple[int, int]:
    """Order an undirected vertex pair as (min, max)."""
    return (u, v) if u < v else (v, u)


class DisjointSet:
    """Union-find with path halving, for Kruskal and connectivity checks."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        self.parent[ry] = rx
        return True


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected connected graph with strictly positive edge costs and a root vertex.

    Edges are stored as (u, v, cost) triples. The root anchors the spanning-tree
    encoding downstream; every vertex must be reachable from it.
    """

    num_vertices: int
    root: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self) -> None:
        n = self.num_vertices
        if n < 2:
            raise ValueError("graph needs at least two vertices")
        if not 0 <= self.root < n:
            raise ValueError(f"root {self.root} out of range for {n} vertices")
        object.__setattr__(
            self, "edges", tuple((int(u), int(v), float(c)) for u, v, c in self.edges)
        )
        seen: set[tuple[int, int]] = set()
        for u, v, cost in self.edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"invalid edge ({u}, {v})")
            pair = canonical_edge(u, v)
            if pair in seen:
                raise ValueError(f"duplicate edge {pair}")
            seen.add(pair)
            if cost <= 0:
                raise ValueError(f"edge {pair} has non-positive cost {cost}")
        if self._reachable_from_root() != set(range(n)):
            raise ValueError("graph is not connected")

    def _reachable_from_root(self) -> set[int]:
        adj: dict[int, list[int]] = {v: [] for v in range(self.num_vertices)}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        seen = {self.root}
        stack = [self.root]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return seen

    @cached_property
    def _cost_map(self) -> dict[tuple[int, int], float]:
        return {canonical_edge(u, v): c for u, v, c in self.edges}

    def edge_pairs(self) -> frozenset[tuple[int, int]]:
        """All edges as canonical (min, max) pairs."""
        return frozenset(self._cost_map)

    def has_edge(self, u: int, v: int) -> bool:
        return canonical_edge(u, v) in self._cost_map

    def cost(self, u: int, v: int) -> float:
        return self._cost_map[canonical_edge(u, v)]

    @property
    def max_cost(self) -> float:
        return max(c for _, _, c in self.edges)

    def neighbors(self, v: int) -> list[int]:
        out = [b if a == v else a for a, b in self._cost_map if v in (a, b)]
        return sorted(out)


def generate_random_graph(
    n: int,
    edge_probability: float,
    weight_low: float,
    weight_high: float,
    seed: int,
) -> WeightedGraph:
    """Sample a connected weighted graph with all-distinct edge costs.

    Edges are kept independently with the given probability; if the result is
    disconnected, the missing links of a seeded random spanning-tree skeleton
    are added (lowest canonical pairs first) until everything hangs together.
    Costs are uniform draws perturbed by rank-ordered multiples of 1e-6 of the
    weight range, so no two edges tie and the MST is unique. The same seed
    reproduces the same graph, bit for bit.
    """
    if n < 2:
        raise ValueError("need at least two vertices (n >= 2)")
    if not 0.0 < edge_probability <= 1.0:
        raise ValueError("edge probability must be in (0, 1]")
    if not 0.0 < weight_low < weight_high:
        raise ValueError("need 0 < weight_low < weight_high")

    rng = random.Random(seed)
    chosen = {pair for pair in combinations(range(n), 2) if rng.random() < edge_probability}

    # Random spanning-tree skeleton: each vertex links to a random earlier one
    # in a shuffled order. Only the component-bridging links get added.
    order = list(range(n))
    rng.shuffle(order)
    skeleton = [canonical_edge(order[i], order[rng.randrange(i)]) for i in range(1, n)]
    dsu = DisjointSet(n)
    for u, v in chosen:
        dsu.union(u, v)
    for u, v in sorted(skeleton):
        if dsu.union(u, v):
            chosen.add((u, v))

    pairs = sorted(chosen)
    base = [rng.uniform(weight_low, weight_high) for _ in pairs]
    jitter = 1e-6 * (weight_high - weight_low)
    costs = list(base)
    for rank, i in enumerate(sorted(range(len(pairs)), key=lambda i: (base[i], i))):
        costs[i] = base[i] + rank * jitter
    if len(set(costs)) != len(costs):
        raise ValueError("tie-breaking jitter failed to separate edge costs")

    return WeightedGraph(n, 0, tuple((u, v, c) for (u, v), c in zip(pairs, costs)))


def kruskal_mst(g: WeightedGraph) -> tuple[frozenset[tuple[int, int]], float]:
    """Minimum spanning tree by Kruskal's greedy merge.

    Returns the tree as canonical pairs plus its total cost. Ties (absent in
    generated graphs) break on the (cost, u, v) sort key, so the result is
    deterministic for any fixed input.
    """
    dsu = DisjointSet(g.num_vertices)
    picked: list[tuple[int, int]] = []
    total = 0.0
    for u, v, c in sorted(g.edges, key=lambda e: (e[2], e[0], e[1])):
        if dsu.union(u, v):
            picked.append(canonical_edge(u, v))
            total += c
    return frozenset(picked), total


def is_spanning_tree(g: WeightedGraph, edge_set) -> bool:
    """True iff the pair set is acyclic, connected, and touches every vertex."""
    pairs = list(edge_set)
    if len(pairs) != g.num_vertices - 1:
        return False
    dsu = DisjointSet(g.num_vertices)
    for u, v in pairs:
        if not dsu.union(u, v):
            return False
    rep = dsu.find(0)
    return all(dsu.find(v) == rep for v in range(g.num_vertices))


def save_graph(g: WeightedGraph, path) -> None:
    """Write the graph as JSON; costs serialize at full precision."""
    payload = {
        "num_vertices": g.num_vertices,
        "root": g.root,
        "edges": [{"u": u, "v": v, "cost": c} for u, v, c in g.edges],
    }
    Path(path).write_text(json.dumps(payload, indent=2) + "\n")


def load_graph(path) -> WeightedGraph:
    """Read a graph written by save_graph, revalidating every invariant."""
    raw = json.loads(Path(path).read_text())
    try:
        edges = tuple((e["u"], e["v"], e["cost"]) for e in raw["edges"])
        return WeightedGraph(raw["num_vertices"], raw["root"], edges)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed graph file {path}: {exc}") from exc
