"""Exact MinHOM solvers and homomorphism checks.

Costs are nonnegative integers; ``math.inf`` (``INF``) forbids a colour.
Colours are the vertices of ``H`` and index the columns of the cost matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from minhom.core import Digraph, directed_cycle, weak_components
from minhom.flow import FlowNetwork
from minhom.ordering import PreconditionViolated, check_minmax, slices_are_intervals

INF = math.inf


class BudgetExceeded(RuntimeError):
    pass


class InternalInconsistency(RuntimeError):
    pass


class NotPolynomial(Exception):
    """Raised by :func:`solve` when ``H`` is NP-hard; carries the verdict."""

    def __init__(self, classification):
        super().__init__(classification.reason)
        self.classification = classification
        self.witness = classification.witness


class CostMatrix:
    """Row ``u`` holds the cost of giving vertex ``u`` of ``D`` each colour."""

    __slots__ = ("rows",)

    def __init__(self, rows: Sequence[Sequence]):
        clean = []
        for u, row in enumerate(rows):
            out = []
            for i, c in enumerate(row):
                if c is None or c == INF:
                    out.append(INF)
                elif isinstance(c, int) and not isinstance(c, bool) and c >= 0:
                    out.append(c)
                else:
                    raise ValueError(f"cost[{u}][{i}] must be a nonnegative integer or infinite, got {c!r}")
            clean.append(tuple(out))
        widths = {len(r) for r in clean}
        if len(widths) > 1:
            raise ValueError("all cost rows must have the same length")
        self.rows = tuple(clean)

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def p(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def __getitem__(self, u: int) -> tuple:
        return self.rows[u]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CostMatrix) and self.rows == other.rows

    def __repr__(self) -> str:
        return f"CostMatrix({[list(r) for r in self.rows]})"

    def check_shape(self, n: int, p: int) -> None:
        if self.n != n or (n and self.p != p):
            raise ValueError(f"cost matrix is {self.n}x{self.p}, expected {n}x{p}")

    def to_json(self) -> dict:
        return {"costs": [[None if c == INF else c for c in row] for row in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "CostMatrix":
        if not isinstance(obj, dict) or not isinstance(obj.get("costs"), list):
            raise ValueError("cost JSON must be an object with a 'costs' list")
        for u, row in enumerate(obj["costs"]):
            if not isinstance(row, list):
                raise ValueError(f"field 'costs[{u}]' must be a list")
        return cls(obj["costs"])


@dataclass(frozen=True)
class Homomorphism:
    map: tuple[int, ...]
    cost: int


def hom_cost(costs: CostMatrix, f: Sequence[int]):
    return sum(costs[u][f[u]] for u in range(len(f)))


def verify_hom(D: Digraph, H: Digraph, f: Sequence[int]) -> Optional[tuple[int, int]]:
    """Least arc of ``D`` not mapped onto an arc of ``H``, or ``None``."""
    if len(f) != D.n or not all(0 <= c < H.n for c in f):
        raise ValueError("map must assign a colour of H to every vertex of D")
    for u, v in D.sorted_arcs():
        if not H.has_arc(f[u], f[v]):
            return (u, v)
    return None


# --- min-cut solver for Min-Max orderings ------------------------------------


@dataclass
class ThresholdNetwork:
    """Layered cut network; colours are ordering positions ``1..p``.

    Node ``u^i`` exists for ``2 <= i <= p``; ``u^1`` is the source and
    ``u^{p+1}`` the sink. ``qplus[i]``/``rplus[i]`` are the first/last
    positions of colour ``i``'s out-slice (``None`` when empty; index 0 unused).
    """

    order: tuple[int, ...]
    n_vertices: int
    qplus: list[Optional[int]]
    rplus: list[Optional[int]]
    arcs: list[tuple[int, int, float]] = field(default_factory=list)
    chain: list[list[float]] = field(default_factory=list)

    SOURCE = 0
    SINK = 1

    @property
    def p(self) -> int:
        return len(self.order)

    @property
    def n_nodes(self) -> int:
        return 2 + self.n_vertices * (self.p - 1)

    def node(self, u: int, i: int) -> int:
        if i == 1:
            return self.SOURCE
        if i == self.p + 1:
            return self.SINK
        return 2 + u * (self.p - 1) + (i - 2)

    def chain_cost(self, u: int, i: int) -> float:
        """Capacity of the chain arc ``u^i -> u^{i+1}``."""
        return self.chain[u][i - 1]


def _slice_bounds(H: Digraph, order: Sequence[int]) -> tuple[list, list]:
    pos = {v: i + 1 for i, v in enumerate(order)}
    qplus: list[Optional[int]] = [None]
    rplus: list[Optional[int]] = [None]
    for v in order:
        positions = [pos[w] for w in H.out_neighbors(v)]
        qplus.append(min(positions) if positions else None)
        rplus.append(max(positions) if positions else None)
    return qplus, rplus


def _nondecreasing(values: list[Optional[int]]) -> bool:
    present = [x for x in values[1:] if x is not None]
    return all(a <= b for a, b in zip(present, present[1:]))


def build_network(H: Digraph, order: Sequence[int], D: Digraph, costs: CostMatrix) -> ThresholdNetwork:
    order = tuple(order)
    if sorted(order) != list(range(H.n)):
        raise PreconditionViolated("ordering must be a permutation of V(H)")
    costs.check_shape(D.n, H.n)
    if check_minmax(H, order) is not None:
        raise PreconditionViolated("ordering is not a Min-Max ordering of H")
    if not slices_are_intervals(H, order):
        raise PreconditionViolated("ordering has non-interval out-slices")
    qplus, rplus = _slice_bounds(H, order)
    if not (_nondecreasing(qplus) and _nondecreasing(rplus)):
        raise PreconditionViolated("slice bounds are not monotone")

    p = len(order)
    net = ThresholdNetwork(order, D.n, qplus, rplus)
    chain = net.chain
    for u in range(D.n):
        has_out = bool(D.out_neighbors(u))
        row = []
        for i in range(1, p + 1):
            c = costs[u][order[i - 1]]
            if has_out and qplus[i] is None:
                c = INF
            row.append(c)
        chain.append(row)

    arcs = net.arcs
    for u in range(D.n):
        for i in range(1, p + 1):
            arcs.append((net.node(u, i), net.node(u, i + 1), chain[u][i - 1]))
        for i in range(2, p):
            arcs.append((net.node(u, i + 1), net.node(u, i), INF))
    for u, v in D.sorted_arcs():
        for i in range(1, p + 1):
            q, r = qplus[i], rplus[i]
            if q is None:
                continue
            if q > 1:
                arcs.append((net.node(u, i), net.node(v, q), INF))
            if r < p:
                arcs.append((net.node(v, r + 1), net.node(u, i + 1), INF))
    return net


def threshold_cut_value(net: ThresholdNetwork, f_positions: Sequence[int]) -> float:
    """Value of the cut induced by thresholds ``f`` (positions, 1-based); ``INF`` if an infinite arc is cut."""
    source = {net.SOURCE}
    for u, fu in enumerate(f_positions):
        source.update(net.node(u, i) for i in range(2, fu + 1))
    total = 0
    for a, b, cap in net.arcs:
        if a in source and b not in source:
            total += cap
    return total


def solve_minmax(
    H: Digraph, order: Sequence[int], D: Digraph, costs: CostMatrix, backend: str = "auto"
) -> Optional[Homomorphism]:
    """Minimum cost homomorphism via a minimum cut; ``None`` if no homomorphism exists.

    ``backend`` selects the max-flow engine (see :meth:`FlowNetwork.max_flow`).
    """
    net = build_network(H, order, D, costs)
    p = net.p
    if D.n == 0:
        return Homomorphism((), 0)
    # Any homomorphism cuts exactly one finite chain arc per vertex, so M
    # strictly exceeds every feasible cut.
    big = 1 + sum(max((c for c in net.chain[u] if c != INF), default=0) for u in range(D.n))
    # A feeder arc of capacity M caps the flow, keeping it within 32 bits.
    feeder = net.n_nodes
    flow = FlowNetwork(net.n_nodes + 1)
    flow.add_edge(feeder, net.SOURCE, big)
    for a, b, cap in net.arcs:
        flow.add_edge(a, b, big if cap == INF else cap)
    value = flow.max_flow(feeder, net.SINK, backend=backend)
    if value >= big:
        return None
    side = flow.source_side(feeder)
    f = []
    for u in range(D.n):
        level = 1
        for i in range(2, p + 1):
            if net.node(u, i) in side:
                level = i
        f.append(net.order[level - 1])
    bad = verify_hom(D, H, f)
    if bad is not None:
        raise InternalInconsistency(f"recovered map violates arc {bad}")
    cost = hom_cost(costs, f)
    if cost != value:
        raise InternalInconsistency(f"recovered map costs {cost} but the cut is {value}")
    return Homomorphism(tuple(f), value)


# --- directed cycles ---------------------------------------------------------


def solve_cycle(k: int, D: Digraph, costs: CostMatrix) -> Optional[Homomorphism]:
    """Minimum cost homomorphism to the loopless cycle ``0 -> 1 -> ... -> k-1 -> 0``."""
    if k < 2:
        raise ValueError("cycle length must be at least 2")
    costs.check_shape(D.n, k)
    label = [-1] * D.n
    f = [0] * D.n
    total = 0
    for comp in weak_components(D):
        seed = min(comp)
        label[seed] = 0
        stack = [seed]
        while stack:
            y = stack.pop()
            for w, want in [(w, (label[y] + 1) % k) for w in D.out_neighbors(y)] + [
                (w, (label[y] - 1) % k) for w in D.in_neighbors(y)
            ]:
                if label[w] < 0:
                    label[w] = want
                    stack.append(w)
                elif label[w] != want:
                    return None
        best_cost, best_rot = INF, None
        for r in range(k):
            c = sum(costs[u][(label[u] + r) % k] for u in comp)
            if c < best_cost:
                best_cost, best_rot = c, r
        if best_rot is None:
            return None
        for u in comp:
            f[u] = (label[u] + best_rot) % k
        total += best_cost
    assert verify_hom(D, directed_cycle(k), f) is None
    return Homomorphism(tuple(f), total)


# --- exhaustive oracle -------------------------------------------------------


def solve_bruteforce(
    H: Digraph,
    D: Digraph,
    costs: CostMatrix,
    node_budget: int = 2_000_000,
    order: Optional[Sequence[int]] = None,
) -> Optional[Homomorphism]:
    """Exact optimum by depth-first search.

    Vertices are assigned in ``order`` (default ``0..n-1``). Each assignment
    filters the domains of unassigned neighbours; a branch is cut when a domain
    empties or the sum of remaining row minima cannot beat the incumbent.
    """
    n, p = D.n, H.n
    costs.check_shape(n, p)
    order = list(range(n)) if order is None else list(order)
    domains = []
    for u in range(n):
        dom = [c for c in range(p) if costs[u][c] != INF]
        if D.has_arc(u, u):
            dom = [c for c in dom if H.has_loop(c)]
        domains.append(sorted(dom, key=lambda c, u=u: (costs[u][c], c)))
    out_sets = [H.out_neighbors(c) for c in range(p)]
    in_sets = [H.in_neighbors(c) for c in range(p)]
    nbrs_out = [sorted(D.out_neighbors(u) - {u}) for u in range(n)]
    nbrs_in = [sorted(D.in_neighbors(u) - {u}) for u in range(n)]

    best = [INF, None]
    assignment = [-1] * n
    expansions = [0]

    def bound(doms: list[list[int]], depth: int) -> float:
        total = 0
        for u in order[depth:]:
            if not doms[u]:
                return INF
            total += costs[u][doms[u][0]]
        return total

    def search(depth: int, spent: int, doms: list[list[int]]) -> None:
        if depth == n:
            if spent < best[0]:
                best[0], best[1] = spent, tuple(assignment)
            return
        u = order[depth]
        for c in doms[u]:
            expansions[0] += 1
            if expansions[0] > node_budget:
                raise BudgetExceeded(f"search exceeded {node_budget} expansions")
            here = spent + costs[u][c]
            if here >= best[0]:
                break  # domains are sorted by cost
            new = list(doms)
            ok = True
            for w in nbrs_out[u]:
                if assignment[w] < 0:
                    new[w] = [x for x in new[w] if x in out_sets[c]]
                    ok = ok and bool(new[w])
            for w in nbrs_in[u]:
                if assignment[w] < 0:
                    new[w] = [x for x in new[w] if x in in_sets[c]]
                    ok = ok and bool(new[w])
            if not ok:
                continue
            assignment[u] = c
            new[u] = [c]
            if here + bound(new, depth + 1) < best[0]:
                search(depth + 1, here, new)
            assignment[u] = -1

    # Neighbours already assigned never need re-checking: their constraint
    # was applied to this vertex's domain when they were assigned.
    search(0, 0, domains)
    if best[1] is None:
        return None
    f = best[1]
    assert verify_hom(D, H, f) is None
    return Homomorphism(f, best[0])


# --- dispatch -----------------------------------------------------------------


def solve(
    H: Digraph,
    D: Digraph,
    costs: CostMatrix,
    oracle: bool = False,
    node_budget: int = 2_000_000,
) -> Optional[Homomorphism]:
    """Classify ``H`` and run the matching exact solver.

    Raises :class:`NotPolynomial` for NP-hard ``H`` unless ``oracle`` asks for
    the exhaustive search.
    """
    from minhom.classifier import NPHard, PolynomialCycle, classify_wpl

    costs.check_shape(D.n, H.n)
    if oracle:
        return solve_bruteforce(H, D, costs, node_budget)
    verdict = classify_wpl(H)
    if isinstance(verdict, NPHard):
        raise NotPolynomial(verdict)
    if isinstance(verdict, PolynomialCycle):
        # Column j of the cycle problem is H's vertex cycle[j].
        cyc = verdict.cycle
        permuted = CostMatrix([[row[cyc[j]] for j in range(verdict.k)] for row in costs.rows])
        res = solve_cycle(verdict.k, D, permuted)
        if res is None:
            return None
        return Homomorphism(tuple(cyc[j] for j in res.map), res.cost)
    return solve_minmax(H, verdict.ordering, D, costs)
