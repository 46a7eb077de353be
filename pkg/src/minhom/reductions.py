"""Independent-set reductions to MinHOM for two fixed three-vertex targets.

``reduce_mis_rprime`` targets ``{01, 12, 21, 20, 11, 22}`` (optionally with a
loop at 0) and has optimum ``4p - alpha(G)``; ``reduce_mis_gadget`` targets
``{01, 10, 12, 20, 22}`` and has optimum ``p - alpha(G)``. Colours ``1, 2, 3``
of the usual presentation are vertices ``0, 1, 2`` here.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from minhom.core import Digraph, digraph_r_prime
from minhom.solver import BudgetExceeded, CostMatrix, Homomorphism

MIS_VERTEX_LIMIT = 24


class UndirectedGraph:
    """Simple undirected graph; edges stored as ``(u, v)`` with ``u < v``."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        es = set()
        adj = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"loop at {u} not allowed in a simple graph")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            es.add((min(u, v), max(u, v)))
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.edges = frozenset(es)
        self._adj = tuple(frozenset(a) for a in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, u: int) -> frozenset[int]:
        return self._adj[u]

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def is_independent(self, S: Iterable[int]) -> bool:
        S = list(S)
        return all(not self.has_edge(a, b) for a, b in combinations(S, 2))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, UndirectedGraph) and (self.n, self.edges) == (other.n, other.edges)

    def __repr__(self) -> str:
        return f"UndirectedGraph(n={self.n}, edges={self.sorted_edges()})"

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, obj: dict) -> "UndirectedGraph":
        if not isinstance(obj, dict) or "n" not in obj or "edges" not in obj:
            raise ValueError("graph JSON must be an object with 'n' and 'edges'")
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError(f"field 'n' must be a positive integer, got {n!r}")
        edges = []
        for i, e in enumerate(obj["edges"]):
            if not isinstance(e, list) or len(e) != 2 or not all(type(x) is int for x in e):
                raise ValueError(f"field 'edges[{i}]' must be a pair of integers, got {e!r}")
            edges.append((e[0], e[1]))
        return cls(n, edges)


@dataclass(frozen=True)
class ReductionInstance:
    D: Digraph
    costs: CostMatrix
    H: Digraph
    tag: str  # "rprime" or "gadget"
    vertex_origin: tuple[tuple, ...]  # per D-vertex: (role, graph vertex or edge)
    G: UndirectedGraph


def reduce_mis_rprime(G: UndirectedGraph, loop_at_1: bool = False) -> ReductionInstance:
    """Bipartite reduction: ``x_1 = 2x``, ``x_2 = 2x + 1``; arcs ``x_1 x_2`` and ``x_2 y_1`` per adjacency."""
    p = G.n
    if p < 1:
        raise ValueError("G must have at least one vertex")
    H = digraph_r_prime(loop_at_first=loop_at_1)
    arcs = [(2 * x, 2 * x + 1) for x in range(p)]
    for x, y in G.sorted_edges():
        arcs += [(2 * x + 1, 2 * y), (2 * y + 1, 2 * x)]
    big = 4 * p + 1
    rows = []
    origin = []
    for x in range(p):
        rows.append([0, big, 2])
        rows.append([big, 3, 2])
        origin += [("x1", x), ("x2", x)]
    return ReductionInstance(Digraph(2 * p, arcs), CostMatrix(rows), H, "rprime", tuple(origin), G)


def gadget_target() -> Digraph:
    return Digraph(3, [(0, 1), (1, 0), (1, 2), (2, 0), (2, 2)])


def reduce_mis_gadget(G: UndirectedGraph) -> ReductionInstance:
    """Graph vertices first, then per edge ``(u, v)``, ``u < v``: ``x_1..x_6, u^e, v^e``."""
    p = G.n
    big = p + 1
    rows = [[1, 0, big] for _ in range(p)]
    origin: list[tuple] = [("vertex", u) for u in range(p)]
    arcs = []
    for e, (u, v) in enumerate(G.sorted_edges()):
        base = p + 8 * e
        x = [base + j for j in range(6)]
        ue, ve = base + 6, base + 7
        arcs += [(x[j], x[(j + 1) % 6]) for j in range(6)]
        arcs += [(x[3], ue), (ue, u), (x[4], ve), (ve, v)]
        rows.append([0, big, big])
        rows += [[0, 0, 0], [0, 0, 0], [0, 0, big], [0, 0, big], [0, 0, 0]]
        rows += [[0, 0, 0], [0, 0, 0]]
        origin += [(f"x{j + 1}", (u, v)) for j in range(6)]
        origin += [("u_e", (u, v)), ("v_e", (u, v))]
    D = Digraph(p + 8 * len(G.edges), arcs)
    return ReductionInstance(D, CostMatrix(rows), gadget_target(), "gadget", tuple(origin), G)


def extract_independent_set(instance: ReductionInstance, f: Homomorphism) -> frozenset[int]:
    """Graph vertices read off an optimal homomorphism."""
    G = instance.G
    if instance.tag == "rprime":
        return frozenset(x for x in range(G.n) if f.map[2 * x] == 0)
    if instance.tag == "gadget":
        return frozenset(u for u in range(G.n) if f.map[u] == 1)
    raise ValueError(f"unknown reduction tag {instance.tag!r}")


def predicted_cost(instance: ReductionInstance, alpha: int) -> int:
    p = instance.G.n
    return 4 * p - alpha if instance.tag == "rprime" else p - alpha


def mis_bruteforce(G: UndirectedGraph, limit: int = MIS_VERTEX_LIMIT) -> tuple[int, frozenset[int]]:
    """Independence number and a maximum independent set, by branch and bound."""
    if G.n > limit:
        raise BudgetExceeded(f"graph has {G.n} vertices, limit is {limit}")
    best: list = [0, frozenset()]

    def grow(chosen: list[int], candidates: list[int]) -> None:
        if len(chosen) + len(candidates) <= best[0]:
            return
        if not candidates:
            best[0], best[1] = len(chosen), frozenset(chosen)
            return
        v, rest = candidates[0], candidates[1:]
        grow(chosen + [v], [w for w in rest if not G.has_edge(v, w)])
        grow(chosen, rest)

    grow([], list(range(G.n)))
    return best[0], best[1]


# --- small graph families ------------------------------------------------------


def complete_graph(n: int) -> UndirectedGraph:
    return UndirectedGraph(n, combinations(range(n), 2))


def path_graph(n: int) -> UndirectedGraph:
    return UndirectedGraph(n, ((i, i + 1) for i in range(n - 1)))


def cycle_graph(n: int) -> UndirectedGraph:
    return UndirectedGraph(n, ((i, (i + 1) % n) for i in range(n)))


def star_graph(leaves: int) -> UndirectedGraph:
    return UndirectedGraph(leaves + 1, ((0, i) for i in range(1, leaves + 1)))


def all_graphs(n: int):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield UndirectedGraph(n, (pairs[i] for i in range(len(pairs)) if mask >> i & 1))


def random_graph(seed: int, n: int, edge_prob: float = 0.5) -> UndirectedGraph:
    rng = random.Random(seed)
    return UndirectedGraph(n, (e for e in combinations(range(n), 2) if rng.random() < edge_prob))
