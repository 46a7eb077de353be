"""Small forbidden induced subdigraphs and proper interval graph recognition.

Pattern search encodes every 2- or 3-vertex induced subdigraph as a small
integer and looks it up in tables precomputed over all relabellings of each
pattern, so a hit is isomorphism-correct by construction.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterable, Optional, Sequence

from minhom.core import (
    Digraph,
    Graph,
    digraph_r,
    digraph_r_prime,
    digraph_w,
    directed_cycle,
)

# Exhaustive fallback limit for umbrella orderings of one component.
EXHAUSTIVE_UMBRELLA_LIMIT = 9


class PatternKind(str, enum.Enum):
    R = "R"
    R_PRIME = "RPrime"
    W = "W"
    REFLEXIVE_C3 = "ReflexiveC3"
    LOOPLESS_C3_WITH_LOOPS = "LooplessC3WithLoops"


class PigKind(str, enum.Enum):
    LONG_INDUCED_CYCLE = "LongInducedCycle"
    CLAW = "Claw"
    NET = "Net"
    TENT = "Tent"


@dataclass(frozen=True)
class PatternHit:
    """``vertices[i]`` is the image of pattern vertex ``i``.

    For ``LooplessC3WithLoops`` the vertices follow the cycle direction and
    ``loop_mask[i]`` tells whether ``vertices[i]`` carries a loop.
    """

    kind: PatternKind
    vertices: tuple[int, ...]
    loop_mask: tuple[bool, ...] = ()


@dataclass(frozen=True)
class PigWitness:
    """Forbidden subgraph of a proper interval graph.

    Vertex layout: Claw ``(centre, leaf, leaf, leaf)``; Net and Tent
    ``(x1, x2, x3, y1, y2, y3)`` with ``x`` the triangle; LongInducedCycle in
    cycle order.
    """

    kind: PigKind
    vertices: tuple[int, ...]


class UmbrellaConstructionError(RuntimeError):
    pass


def _pair_code(H: Digraph, x: int, y: int) -> int:
    return H.has_arc(x, y) | (H.has_arc(y, x) << 1)


def _code2(H: Digraph, a: int, b: int) -> int:
    return H.has_loop(a) | (H.has_loop(b) << 1) | (_pair_code(H, a, b) << 2)


def _code3(H: Digraph, a: int, b: int, c: int) -> int:
    return (
        H.has_loop(a)
        | (H.has_loop(b) << 1)
        | (H.has_loop(c) << 2)
        | (_pair_code(H, a, b) << 3)
        | (_pair_code(H, a, c) << 5)
        | (_pair_code(H, b, c) << 7)
    )


def _c3_with_loops(mask: Sequence[bool]) -> Digraph:
    return directed_cycle(3, [i for i in range(3) if mask[i]])


def _pattern_bases(kind: PatternKind) -> list[tuple[Digraph, tuple[bool, ...]]]:
    if kind is PatternKind.R:
        return [(digraph_r(), ())]
    if kind is PatternKind.R_PRIME:
        return [(digraph_r_prime(), ())]
    if kind is PatternKind.W:
        return [(digraph_w(), ())]
    if kind is PatternKind.REFLEXIVE_C3:
        return [(directed_cycle(3, range(3)), ())]
    masks = [m for m in ((a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)) if any(m)]
    return [(_c3_with_loops([bool(x) for x in m]), tuple(bool(x) for x in m)) for m in masks]


def _build_table(kind: PatternKind) -> dict[int, tuple[tuple[int, ...], tuple[bool, ...]]]:
    """Map code -> (slot of each pattern vertex in the sorted subset, loop mask)."""
    table: dict[int, tuple[tuple[int, ...], tuple[bool, ...]]] = {}
    for base, mask in _pattern_bases(kind):
        m = base.n
        for perm in permutations(range(m)):
            # Pattern vertex i is placed at sorted slot perm[i].
            placed = Digraph(m, ((perm[u], perm[v]) for u, v in base.arcs))
            code = _code2(placed, 0, 1) if m == 2 else _code3(placed, 0, 1, 2)
            table.setdefault(code, (perm, mask))
    return table


_TABLES = {kind: _build_table(kind) for kind in PatternKind}
_SIZES = {kind: (2 if kind is PatternKind.W else 3) for kind in PatternKind}


def find_patterns(
    H: Digraph, kinds: Iterable[PatternKind], within: Optional[Iterable[int]] = None
) -> dict[PatternKind, PatternHit]:
    """First hit (lexicographic over sorted subsets) for each requested kind.

    One pass over pairs and one over triples; stops once every kind is hit.
    """
    kinds = list(kinds)
    verts = sorted(range(H.n) if within is None else set(within))
    hits: dict[PatternKind, PatternHit] = {}

    def record(kind: PatternKind, subset: tuple[int, ...], code: int) -> None:
        perm, mask = _TABLES[kind][code]
        hits[kind] = PatternHit(kind, tuple(subset[perm[i]] for i in range(len(subset))), mask)

    pair_kinds = [k for k in kinds if _SIZES[k] == 2]
    if pair_kinds:
        for subset in combinations(verts, 2):
            code = _code2(H, *subset)
            for k in pair_kinds:
                if k not in hits and code in _TABLES[k]:
                    record(k, subset, code)
            if all(k in hits for k in pair_kinds):
                break
    triple_kinds = [k for k in kinds if _SIZES[k] == 3]
    if not triple_kinds:
        return hits
    # Code -> kinds it matches, plus precomputed pair codes: this loop is cubic.
    wanted: dict[int, list[PatternKind]] = {}
    for k in triple_kinds:
        if k not in hits:
            for code in _TABLES[k]:
                wanted.setdefault(code, []).append(k)
    loop = [H.has_loop(v) for v in range(H.n)]
    pc = {(a, b): _pair_code(H, a, b) for a, b in combinations(verts, 2)}
    remaining = {k for k in triple_kinds if k not in hits}
    for ia, a in enumerate(verts):
        for ib in range(ia + 1, len(verts)):
            b = verts[ib]
            head = loop[a] | (loop[b] << 1) | (pc[a, b] << 3)
            for c in verts[ib + 1:]:
                code = head | (loop[c] << 2) | (pc[a, c] << 5) | (pc[b, c] << 7)
                found = wanted.get(code)
                if found is None:
                    continue
                for k in found:
                    if k in remaining:
                        record(k, (a, b, c), code)
                        remaining.discard(k)
                if not remaining:
                    return hits
    return hits


def find_pattern(
    H: Digraph, kind: PatternKind, within: Optional[Iterable[int]] = None
) -> Optional[PatternHit]:
    return find_patterns(H, [kind], within).get(kind)


def verify_pattern_hit(H: Digraph, hit: PatternHit) -> bool:
    """Re-check a hit by direct comparison with the named pattern."""
    vs = hit.vertices
    if len(set(vs)) != len(vs) or not all(0 <= v < H.n for v in vs):
        return False
    if hit.kind is PatternKind.LOOPLESS_C3_WITH_LOOPS:
        if len(vs) != 3 or len(hit.loop_mask) != 3 or not any(hit.loop_mask):
            return False
        pattern = _c3_with_loops(hit.loop_mask)
    else:
        pattern = _pattern_bases(hit.kind)[0][0]
        if len(vs) != pattern.n:
            return False
    return all(
        H.has_arc(vs[a], vs[b]) == pattern.has_arc(a, b)
        for a in range(pattern.n)
        for b in range(pattern.n)
    )


def is_transitive_tournament(H: Digraph) -> Optional[tuple[int, ...]]:
    """Acyclic ordering of a loopless transitive tournament, else ``None``."""
    if H.loops():
        return None
    order = tuple(sorted(range(H.n), key=lambda u: -len(H.out_neighbors(u))))
    for i, j in combinations(range(H.n), 2):
        if not H.has_arc(order[i], order[j]) or H.has_arc(order[j], order[i]):
            return None
    return order


# --- proper interval graphs -------------------------------------------------


def check_umbrella(G: Graph, order: Sequence[int]) -> Optional[tuple[int, int, int]]:
    """Least violating position triple ``(i, j, k)``, or ``None``.

    A violation is ``i < j < k`` with ``order[i] order[k]`` an edge but one of
    ``order[i] order[j]``, ``order[j] order[k]`` missing.
    """
    if sorted(order) != list(range(G.n)):
        raise ValueError("order must be a permutation of the vertices")
    n = G.n
    pos = {v: i for i, v in enumerate(order)}
    nbr_mask = [0] * n
    for i, v in enumerate(order):
        for w in G.neighbors(v):
            nbr_mask[i] |= 1 << pos[w]
    for i in range(n):
        best: Optional[tuple[int, int]] = None
        for k in range(i + 2, n):
            if not nbr_mask[i] >> k & 1:
                continue
            between = ((1 << k) - 1) & ~((1 << (i + 1)) - 1)
            bad = between & ~(nbr_mask[i] & nbr_mask[k])
            if bad:
                j = (bad & -bad).bit_length() - 1
                if best is None or j < best[0]:
                    best = (j, k)
        if best is not None:
            return (i, best[0], best[1])
    return None


def _lexbfs(G: Graph, vertices: Sequence[int], prev: Optional[Sequence[int]] = None) -> list[int]:
    """LexBFS over ``vertices``; with ``prev`` given, ties go to the vertex latest in ``prev`` (LexBFS+)."""
    rank = {v: i for i, v in enumerate(prev)} if prev is not None else {v: -v for v in vertices}
    labels: dict[int, list[int]] = {v: [] for v in vertices}
    order: list[int] = []
    m = len(vertices)
    while labels:
        v = max(labels, key=lambda x: (labels[x], rank[x]))
        del labels[v]
        order.append(v)
        stamp = m - len(order)
        for w in G.neighbors(v):
            if w in labels:
                labels[w].append(stamp)
    return order


def _induced_graph(G: Graph, vs: Sequence[int]) -> tuple[Graph, list[int]]:
    idx = sorted(vs)
    pos = {v: i for i, v in enumerate(idx)}
    edges = [(pos[u], pos[w]) for u in idx for w in G.neighbors(u) if w in pos and u < w]
    edges += [(i,) for i in range(len(idx))]
    return Graph(len(idx), edges), idx


def _component_umbrella(G: Graph, comp: Sequence[int]) -> Optional[list[int]]:
    sub, idx = _induced_graph(G, comp)
    local = list(range(sub.n))
    sigma = _lexbfs(sub, local)
    for _ in range(3):
        sigma = _lexbfs(sub, local, sigma)
        if check_umbrella(sub, sigma) is None:
            return [idx[v] for v in sigma]
    return None


def _exhaustive_umbrella(G: Graph, comp: Sequence[int]) -> Optional[list[int]]:
    sub, idx = _induced_graph(G, comp)
    if sub.n > EXHAUSTIVE_UMBRELLA_LIMIT:
        return None
    for perm in permutations(range(sub.n)):
        if check_umbrella(sub, perm) is None:
            return [idx[v] for v in perm]
    return None


def graph_components(G: Graph) -> list[list[int]]:
    seen = [False] * G.n
    comps = []
    for s in range(G.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, queue = [s], deque([s])
        while queue:
            u = queue.popleft()
            for w in sorted(G.neighbors(u)):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        comps.append(sorted(comp))
    return comps


def umbrella_ordering(G: Graph):
    """Umbrella ordering of a reflexive graph, or a forbidden-subgraph witness.

    Components are ordered independently by repeated LexBFS+ sweeps and
    concatenated. Returns a tuple of vertices or a :class:`PigWitness`.
    """
    if not G.is_reflexive():
        raise ValueError("umbrella_ordering requires a reflexive graph")
    order: list[int] = []
    for comp in graph_components(G):
        part = _component_umbrella(G, comp)
        if part is None:
            witness = find_pig_witness(G)
            if witness is not None:
                return witness
            # Sweeps are exact on proper interval graphs; this is a safety net.
            part = _exhaustive_umbrella(G, comp)
        if part is None:
            raise UmbrellaConstructionError(
                f"no umbrella ordering found for component of size {len(comp)} and no witness"
            )
        order.extend(part)
    result = tuple(order)
    if check_umbrella(G, result) is not None:
        raise UmbrellaConstructionError("concatenated ordering failed the umbrella check")
    return result


def _find_long_cycle(G: Graph) -> Optional[tuple[int, ...]]:
    # With v the least cycle vertex and a, b its cycle neighbours, the rest of a
    # chordless cycle is an induced a-b path above v avoiding N(v).
    for v in range(G.n):
        nv = G.neighbors(v)
        higher = sorted(w for w in nv if w > v)
        for a, b in combinations(higher, 2):
            if G.has_edge(a, b):
                continue
            allowed = {w for w in range(v + 1, G.n) if w not in nv} | {a, b}
            parent = {a: None}
            queue = deque([a])
            while queue and b not in parent:
                u = queue.popleft()
                for w in sorted(G.neighbors(u)):
                    if w in allowed and w not in parent and not (u == a and w == b):
                        parent[w] = u
                        queue.append(w)
            if b in parent:
                path = []
                x = b
                while x is not None:
                    path.append(x)
                    x = parent[x]
                return (v,) + tuple(reversed(path))
    return None


def _find_claw(G: Graph) -> Optional[tuple[int, ...]]:
    best = None
    for y in range(G.n):
        for trio in combinations(sorted(G.neighbors(y)), 3):
            if not any(G.has_edge(a, b) for a, b in combinations(trio, 2)):
                cand = (y,) + trio
                if best is None or sorted(cand) < sorted(best):
                    best = cand
    return best


def _find_net_or_tent(G: Graph, kind: PigKind) -> Optional[tuple[int, ...]]:
    best = None
    for x in combinations(range(G.n), 3):
        if not all(G.has_edge(a, b) for a, b in combinations(x, 2)):
            continue
        for xs in permutations(x):
            choices = []
            for i in range(3):
                if kind is PigKind.NET:
                    want = {xs[i]}
                else:
                    want = {xs[(i + 1) % 3], xs[(i + 2) % 3]}
                choices.append(
                    [
                        y
                        for y in range(G.n)
                        if y not in x and {w for w in xs if G.has_edge(y, w)} == want
                    ]
                )
            for ys in _independent_picks(G, choices):
                cand = xs + ys
                if best is None or (sorted(cand), cand) < (sorted(best), best):
                    best = cand
    return best


def _independent_picks(G: Graph, choices: list[list[int]]):
    for y1 in choices[0]:
        for y2 in choices[1]:
            if y2 == y1 or G.has_edge(y1, y2):
                continue
            for y3 in choices[2]:
                if y3 in (y1, y2) or G.has_edge(y1, y3) or G.has_edge(y2, y3):
                    continue
                yield (y1, y2, y3)


def find_pig_witness(G: Graph) -> Optional[PigWitness]:
    """Forbidden induced subgraph of a proper interval graph, if any.

    Preference: long chordless cycle, claw, net, tent. Loops are ignored.
    """
    cycle = _find_long_cycle(G)
    if cycle is not None:
        return PigWitness(PigKind.LONG_INDUCED_CYCLE, cycle)
    claw = _find_claw(G)
    if claw is not None:
        return PigWitness(PigKind.CLAW, claw)
    for kind in (PigKind.NET, PigKind.TENT):
        found = _find_net_or_tent(G, kind)
        if found is not None:
            return PigWitness(kind, found)
    return None


def pig_pattern_edges(kind: PigKind, size: int) -> set[frozenset[int]]:
    """Edge set of the pattern in witness-slot coordinates."""
    if kind is PigKind.LONG_INDUCED_CYCLE:
        return {frozenset((i, (i + 1) % size)) for i in range(size)}
    if kind is PigKind.CLAW:
        return {frozenset((0, i)) for i in (1, 2, 3)}
    triangle = {frozenset(p) for p in combinations(range(3), 2)}
    if kind is PigKind.NET:
        return triangle | {frozenset((3 + i, i)) for i in range(3)}
    return triangle | {frozenset((3 + i, j)) for i in range(3) for j in range(3) if j != i}


def verify_pig_witness(G: Graph, witness: PigWitness) -> bool:
    vs = witness.vertices
    if len(set(vs)) != len(vs) or not all(0 <= v < G.n for v in vs):
        return False
    expected_size = {PigKind.CLAW: 4, PigKind.NET: 6, PigKind.TENT: 6}.get(witness.kind)
    if expected_size is None:
        if len(vs) < 4:
            return False
    elif len(vs) != expected_size:
        return False
    edges = pig_pattern_edges(witness.kind, len(vs))
    return all(
        G.has_edge(vs[a], vs[b]) == (frozenset((a, b)) in edges)
        for a, b in combinations(range(len(vs)), 2)
    )


def is_proper_interval(G: Graph) -> bool:
    return not isinstance(umbrella_ordering(G), PigWitness)


# Small named reflexive graphs, handy for callers and tests.

def reflexive_graph(n: int, edges: Iterable[tuple[int, int]]) -> Graph:
    return Graph(n, list(edges) + [(i,) for i in range(n)])

