"""Digraph data model and the structural transforms built on it.

Vertices are dense integers ``0..n-1``. A loop is an ordinary arc ``(u, u)``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence


class Digraph:
    """Immutable digraph with possible loops."""

    __slots__ = ("n", "arcs", "_out", "_in")

    def __init__(self, n: int, arcs: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise ValueError(f"vertex count must be nonnegative, got {n}")
        arc_set = frozenset((int(u), int(v)) for u, v in arcs)
        out: list[set[int]] = [set() for _ in range(n)]
        inn: list[set[int]] = [set() for _ in range(n)]
        for u, v in arc_set:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc ({u}, {v}) out of range for n={n}")
            out[u].add(v)
            inn[v].add(u)
        self.n = n
        self.arcs = arc_set
        self._out = tuple(frozenset(s) for s in out)
        self._in = tuple(frozenset(s) for s in inn)

    def has_arc(self, u: int, v: int) -> bool:
        return v in self._out[u]

    def has_loop(self, u: int) -> bool:
        return u in self._out[u]

    def out_neighbors(self, u: int) -> frozenset[int]:
        return self._out[u]

    def in_neighbors(self, u: int) -> frozenset[int]:
        return self._in[u]

    def loops(self) -> frozenset[int]:
        return frozenset(u for u in range(self.n) if self.has_loop(u))

    def strictly_dominates(self, u: int, v: int) -> bool:
        return self.has_arc(u, v) and not self.has_arc(v, u)

    def sorted_arcs(self) -> list[tuple[int, int]]:
        return sorted(self.arcs)

    @property
    def vertices(self) -> range:
        return range(self.n)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.arcs == other.arcs

    def __hash__(self) -> int:
        return hash((self.n, self.arcs))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.sorted_arcs()})"

    def to_json(self) -> dict:
        return {"n": self.n, "arcs": [list(a) for a in self.sorted_arcs()]}

    @classmethod
    def from_json(cls, obj: dict) -> "Digraph":
        if not isinstance(obj, dict) or "n" not in obj or "arcs" not in obj:
            raise ValueError("digraph JSON must be an object with 'n' and 'arcs'")
        n = obj["n"]
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise ValueError(f"field 'n' must be a positive integer, got {n!r}")
        arcs = []
        for i, arc in enumerate(obj["arcs"]):
            if (
                not isinstance(arc, list)
                or len(arc) != 2
                or not all(isinstance(x, int) and not isinstance(x, bool) for x in arc)
            ):
                raise ValueError(f"field 'arcs[{i}]' must be a pair of integers, got {arc!r}")
            arcs.append((arc[0], arc[1]))
        return cls(n, arcs)


class Graph:
    """Immutable undirected graph; a loop is the one-element edge ``frozenset({u})``."""

    __slots__ = ("n", "edges", "_adj")

    def __init__(self, n: int, edges: Iterable[Iterable[int]] = ()):
        adj: list[set[int]] = [set() for _ in range(n)]
        edge_set = set()
        for e in edges:
            e = frozenset(int(x) for x in e)
            if not 1 <= len(e) <= 2 or not all(0 <= x < n for x in e):
                raise ValueError(f"bad edge {sorted(e)} for n={n}")
            edge_set.add(e)
            if len(e) == 1:
                (u,) = e
                adj[u].add(u)
            else:
                u, v = e
                adj[u].add(v)
                adj[v].add(u)
        self.n = n
        self.edges = frozenset(edge_set)
        self._adj = tuple(frozenset(s) for s in adj)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def neighbors(self, u: int) -> frozenset[int]:
        """Neighbours of ``u`` excluding ``u`` itself."""
        return self._adj[u] - {u}

    def is_reflexive(self) -> bool:
        return all(u in self._adj[u] for u in range(self.n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        shown = sorted(tuple(sorted(e)) for e in self.edges)
        return f"Graph(n={self.n}, edges={shown})"


@dataclass(frozen=True)
class LoopSplit:
    loop_vertices: frozenset[int]
    free_vertices: frozenset[int]


def is_semicomplete_wpl(H: Digraph) -> bool:
    return all(H.has_arc(u, v) or H.has_arc(v, u) for u, v in combinations(range(H.n), 2))


def symmetric_subdigraph(H: Digraph) -> Digraph:
    """Arcs present in both directions; loops are kept."""
    return Digraph(H.n, ((u, v) for u, v in H.arcs if H.has_arc(v, u)))


def underlying_graph(D: Digraph) -> Graph:
    return Graph(D.n, ((u, v) for u, v in D.arcs))


def loop_split(H: Digraph) -> LoopSplit:
    loops = H.loops()
    return LoopSplit(loops, frozenset(range(H.n)) - loops)


def induced(H: Digraph, S: Iterable[int]) -> tuple[Digraph, tuple[int, ...]]:
    """Induced subdigraph on ``S`` relabelled ``0..|S|-1`` in ascending order.

    Returns the subdigraph and the map from new labels back to ``H``'s vertices.
    """
    index = tuple(sorted(set(S)))
    for v in index:
        if not 0 <= v < H.n:
            raise ValueError(f"vertex {v} out of range for n={H.n}")
    pos = {v: i for i, v in enumerate(index)}
    arcs = [(pos[u], pos[v]) for u in index for v in H.out_neighbors(u) if v in pos]
    return Digraph(len(index), arcs), index


def converse(H: Digraph) -> Digraph:
    return Digraph(H.n, ((v, u) for u, v in H.arcs))


def relabel(H: Digraph, perm: Sequence[int]) -> Digraph:
    """Digraph with vertex ``u`` renamed ``perm[u]``."""
    if sorted(perm) != list(range(H.n)):
        raise ValueError("perm must be a permutation of the vertices")
    return Digraph(H.n, ((perm[u], perm[v]) for u, v in H.arcs))


def compose(T: Digraph, blocks: Sequence[Digraph]) -> Digraph:
    """Composition ``T[S_1, ..., S_k]`` of a transitive tournament with blocks.

    Block ``i`` occupies a contiguous label range, in block order.
    """
    from minhom.recognition import is_transitive_tournament

    if len(blocks) != T.n:
        raise ValueError(f"expected {T.n} blocks, got {len(blocks)}")
    if is_transitive_tournament(T) is None:
        raise ValueError("T must be a loopless transitive tournament")
    offsets = [0]
    for b in blocks:
        offsets.append(offsets[-1] + b.n)
    arcs = []
    for i, b in enumerate(blocks):
        arcs.extend((u + offsets[i], v + offsets[i]) for u, v in b.arcs)
    for i, j in T.arcs:
        for x in range(offsets[i], offsets[i + 1]):
            for y in range(offsets[j], offsets[j + 1]):
                arcs.append((x, y))
    return Digraph(offsets[-1], arcs)


def weak_components(D: Digraph) -> list[frozenset[int]]:
    """Weakly connected components, ordered by their least vertex."""
    seen = [False] * D.n
    comps = []
    for start in range(D.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = [start]
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in D.out_neighbors(u) | D.in_neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(frozenset(comp))
    return comps


def random_semicomplete_wpl(seed: int, n: int, sym_prob: float, loop_prob: float) -> Digraph:
    """Seeded random semicomplete digraph with possible loops.

    Each pair gets both arcs with probability ``sym_prob``, otherwise a single
    arc whose direction is a fair coin; each vertex gets a loop with
    probability ``loop_prob``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not (0.0 <= sym_prob <= 1.0 and 0.0 <= loop_prob <= 1.0):
        raise ValueError("probabilities must lie in [0, 1]")
    rng = random.Random(seed)
    arcs = []
    for u, v in combinations(range(n), 2):
        if rng.random() < sym_prob:
            arcs += [(u, v), (v, u)]
        elif rng.random() < 0.5:
            arcs.append((u, v))
        else:
            arcs.append((v, u))
    for u in range(n):
        if rng.random() < loop_prob:
            arcs.append((u, u))
    return Digraph(n, arcs)


def random_digraph(seed: int, n: int, arc_prob: float, loop_prob: float = 0.0) -> Digraph:
    """Seeded random digraph (input-side instances)."""
    rng = random.Random(seed)
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and rng.random() < arc_prob]
    arcs += [(u, u) for u in range(n) if rng.random() < loop_prob]
    return Digraph(n, arcs)


# Named digraphs. 0-based relabelling of the usual 1-based definitions.

def directed_cycle(k: int, loops: Iterable[int] = ()) -> Digraph:
    arcs = [(i, (i + 1) % k) for i in range(k)]
    return Digraph(k, arcs + [(u, u) for u in loops])


def transitive_tournament(p: int, loops: Iterable[int] = ()) -> Digraph:
    arcs = [(i, j) for i, j in combinations(range(p), 2)]
    return Digraph(p, arcs + [(u, u) for u in loops])


def complete_reflexive(n: int) -> Digraph:
    """``K*_n``: every arc including all loops."""
    return Digraph(n, ((u, v) for u in range(n) for v in range(n)))


def digraph_r() -> Digraph:
    return Digraph(3, [(0, 1), (1, 2), (2, 0), (0, 2), (0, 0), (1, 1), (2, 2)])


def digraph_r_prime(loop_at_first: bool = False) -> Digraph:
    arcs = [(0, 1), (1, 2), (2, 1), (2, 0), (1, 1), (2, 2)]
    if loop_at_first:
        arcs.append((0, 0))
    return Digraph(3, arcs)


def digraph_w() -> Digraph:
    return Digraph(2, [(0, 1), (1, 0), (1, 1)])


def complete_reflexive_minus_arc() -> Digraph:
    """``K*_3 - e`` with the arc ``1 -> 0`` removed."""
    return Digraph(3, [a for a in complete_reflexive(3).arcs if a != (1, 0)])


def all_semicomplete_wpl(n: int):
    """Every labelled semicomplete digraph with possible loops on ``n`` vertices."""
    pairs = list(combinations(range(n), 2))
    choices = ([(0, 1)], [(1, 0)], [(0, 1), (1, 0)])

    def rec(i: int, acc: list):
        if i == len(pairs):
            yield acc
            return
        u, v = pairs[i]
        for c in choices:
            yield from rec(i + 1, acc + [((u, v) if a == (0, 1) else (v, u)) for a in c])

    for arcs in rec(0, []):
        for mask in range(1 << n):
            yield Digraph(n, arcs + [(u, u) for u in range(n) if mask >> u & 1])
