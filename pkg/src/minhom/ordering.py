"""Min-Max orderings: verification and construction for the polynomial classes.

An ordering is a tuple of vertex ids, position ``i`` holding the ``i``-th
vertex.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from minhom.core import (
    Digraph,
    induced,
    loop_split,
    symmetric_subdigraph,
    underlying_graph,
    weak_components,
)
from minhom.recognition import (
    PatternKind,
    PigWitness,
    find_pattern,
    is_transitive_tournament,
    umbrella_ordering,
)

Ordering = tuple[int, ...]


class PreconditionViolated(ValueError):
    """Input lies outside the class the construction was called for."""


class NeitherDirectionWorks(PreconditionViolated):
    pass


class NonUniformCrossArcs(PreconditionViolated):
    pass


class CyclicComponentTournament(PreconditionViolated):
    pass


@dataclass(frozen=True)
class MinMaxViolation:
    arc_e: tuple[int, int]
    arc_f: tuple[int, int]
    missing: str  # "min" or "max"
    pair: tuple[int, int]


@dataclass(frozen=True)
class Decomposition:
    """Blocks ``S_1..S_k`` of ``TT_k[S_1, ..., S_k]`` in tournament order."""

    blocks: tuple[frozenset[int], ...]
    kinds: tuple[str, ...]  # "loopless" or "reflexive" per block


@dataclass(frozen=True)
class DecompositionFailure:
    reason: str
    vertices: tuple[int, ...]


def _validate(H: Digraph, order: Sequence[int]) -> None:
    if sorted(order) != list(range(H.n)):
        raise ValueError("ordering must be a permutation of the vertices")


def _out_masks(H: Digraph, order: Sequence[int]) -> list[int]:
    pos = {v: i for i, v in enumerate(order)}
    masks = [0] * H.n
    for u, v in H.arcs:
        masks[pos[u]] |= 1 << pos[v]
    return masks


def check_minmax(H: Digraph, order: Sequence[int]) -> Optional[MinMaxViolation]:
    """First arc pair whose coordinatewise min or max is not an arc.

    Only crossing pairs ``(i, k), (j, s)`` with ``i < j`` and ``s < k`` can
    fail; their min is ``(i, s)`` and max is ``(j, k)``. Pairs are scanned in
    position order and ``None`` means the ordering is Min-Max.
    """
    _validate(H, order)
    out = _out_masks(H, order)
    p = H.n
    for i in range(p):
        row = out[i]
        k = 0
        while row >> k:
            if row >> k & 1:
                below_k = (1 << k) - 1
                for j in range(i + 1, p):
                    low = out[j] & below_k
                    if not low:
                        continue
                    s = (low & -low).bit_length() - 1
                    missing_min = low & ~out[i]
                    if missing_min:
                        s = (missing_min & -missing_min).bit_length() - 1
                        return MinMaxViolation(
                            (order[i], order[k]), (order[j], order[s]), "min", (order[i], order[s])
                        )
                    if not out[j] >> k & 1:
                        return MinMaxViolation(
                            (order[i], order[k]), (order[j], order[s]), "max", (order[j], order[k])
                        )
            k += 1
    return None


def slices_are_intervals(H: Digraph, order: Sequence[int]) -> bool:
    """Whether every out-neighbourhood is a contiguous run of positions."""
    _validate(H, order)
    for mask in _out_masks(H, order):
        if mask:
            low = mask & -mask
            shifted = mask // low
            if shifted & (shifted + 1):
                return False
    return True


def orient_component(H: Digraph, comp: Sequence[int], umb: Sequence[int]) -> Ordering:
    """Return ``umb`` or its reversal so that every earlier vertex dominates every later one."""
    if set(comp) != set(umb) or len(umb) != len(set(umb)):
        raise ValueError("umbrella ordering must cover exactly the component")

    def forward(seq: Sequence[int]) -> bool:
        return all(H.has_arc(seq[a], seq[b]) for a in range(len(seq)) for b in range(a + 1, len(seq)))

    if forward(umb):
        return tuple(umb)
    rev = tuple(reversed(umb))
    if forward(rev):
        return rev
    raise NeitherDirectionWorks(f"component {sorted(comp)} has backward asymmetric arcs either way")


def _dominance(H: Digraph, A: frozenset[int], B: frozenset[int]) -> Optional[bool]:
    """True if ``A`` strictly dominates ``B``, False if the reverse, None if mixed."""
    if all(H.strictly_dominates(a, b) for a in A for b in B):
        return True
    if all(H.strictly_dominates(b, a) for a in A for b in B):
        return False
    return None


def order_components(H: Digraph, comps: Sequence[frozenset[int]]) -> list[int]:
    """Indices of ``comps`` so that earlier components strictly dominate later ones."""
    k = len(comps)
    wins = [0] * k
    for a in range(k):
        for b in range(a + 1, k):
            d = _dominance(H, comps[a], comps[b])
            if d is None:
                raise NonUniformCrossArcs(
                    f"arcs between {sorted(comps[a])} and {sorted(comps[b])} are not uniform"
                )
            wins[a if d else b] += 1
    order = sorted(range(k), key=lambda c: (-wins[c], min(comps[c])))
    for x in range(k):
        for y in range(x + 1, k):
            if not _dominance(H, comps[order[x]], comps[order[y]]):
                raise CyclicComponentTournament("components do not dominate each other acyclically")
    return order


def _oriented_umbrella(H: Digraph, comp: frozenset[int], sym: Digraph) -> Ordering:
    sub, index = induced(sym, comp)
    umb = umbrella_ordering(underlying_graph(sub))
    if isinstance(umb, PigWitness):
        raise PreconditionViolated(
            f"symmetric part of component {sorted(comp)} is not proper interval ({umb.kind.value})"
        )
    return orient_component(H, sorted(comp), [index[v] for v in umb])


def build_minmax_wpl(H: Digraph) -> Ordering:
    """Min-Max ordering for a semicomplete digraph with possible loops in the polynomial class.

    Components of the symmetric part of the reflexive vertices are ordered
    internally by oriented umbrella orderings, ordered among themselves by
    strict domination, then inserted into the acyclic ordering of the loopless
    vertices after the last loopless vertex dominating them. Every step is
    verified; a failure raises :class:`PreconditionViolated`.
    """
    split = loop_split(H)
    L = split.loop_vertices
    sym = symmetric_subdigraph(H)
    L_sym, L_index = induced(sym, L)
    comps = [frozenset(L_index[v] for v in c) for c in weak_components(L_sym)]
    blocks = [_oriented_umbrella(H, c, sym) for c in comps]
    comp_order = order_components(H, comps)

    I_sub, I_index = induced(H, split.free_vertices)
    acyclic = is_transitive_tournament(I_sub)
    if acyclic is None:
        raise PreconditionViolated("loopless part is not a transitive tournament")
    free = [I_index[v] for v in acyclic]

    slots: list[list[int]] = [[] for _ in range(len(free) + 1)]
    last_slot = 0
    for c in comp_order:
        comp = comps[c]
        dominated_by = []
        for u in free:
            d = _dominance(H, frozenset([u]), comp)
            if d is None:
                raise NonUniformCrossArcs(f"loopless vertex {u} is mixed with component {sorted(comp)}")
            dominated_by.append(d)
        slot = sum(dominated_by)
        if dominated_by != [True] * slot + [False] * (len(free) - slot):
            raise PreconditionViolated(f"component {sorted(comp)} cannot be inserted acyclically")
        if slot < last_slot:
            raise PreconditionViolated("insertion would reorder components")
        last_slot = slot
        slots[slot].extend(blocks[c])

    order: list[int] = []
    for s in range(len(free) + 1):
        order.extend(slots[s])
        if s < len(free):
            order.append(free[s])
    result = tuple(order)

    backward = check_forward(H, result)
    if backward is not None:
        raise PreconditionViolated(f"{backward[0]} does not dominate later vertex {backward[1]}")
    violation = check_minmax(H, result)
    if violation is not None:
        raise PreconditionViolated(f"constructed ordering is not Min-Max: {violation}")
    if not slices_are_intervals(H, result):
        raise PreconditionViolated("constructed ordering has non-interval out-slices")
    return result


def decompose_tt_composition(H: Digraph) -> Union[Decomposition, DecompositionFailure]:
    """Write ``H`` as ``TT_k[S_1, ..., S_k]`` with admissible blocks, or say why not.

    Blocks are the components of the symmetric part on looped vertices plus a
    singleton per loopless vertex. Reflexive blocks must be free of ``R`` with
    a proper interval symmetric part.
    """
    split = loop_split(H)
    sym = symmetric_subdigraph(H)
    L_sym, L_index = induced(sym, split.loop_vertices)
    blocks = [frozenset(L_index[v] for v in c) for c in weak_components(L_sym)]
    blocks += [frozenset([v]) for v in sorted(split.free_vertices)]

    wins = [0] * len(blocks)
    for a in range(len(blocks)):
        for b in range(a + 1, len(blocks)):
            d = _dominance(H, blocks[a], blocks[b])
            if d is None:
                return DecompositionFailure(
                    "non-uniform arcs between blocks", tuple(sorted(blocks[a] | blocks[b]))
                )
            wins[a if d else b] += 1
    order = sorted(range(len(blocks)), key=lambda c: (-wins[c], min(blocks[c])))
    for x in range(len(order)):
        for y in range(x + 1, len(order)):
            if not _dominance(H, blocks[order[x]], blocks[order[y]]):
                return DecompositionFailure(
                    "block tournament is cyclic",
                    tuple(sorted(blocks[order[x]] | blocks[order[y]])),
                )

    kinds = []
    for c in order:
        block = blocks[c]
        if not H.has_loop(min(block)):
            kinds.append("loopless")
            continue
        kinds.append("reflexive")
        sub, index = induced(H, block)
        hit = find_pattern(sub, PatternKind.R)
        if hit is not None:
            return DecompositionFailure(
                "reflexive block contains R", tuple(index[v] for v in hit.vertices)
            )
        umb = umbrella_ordering(underlying_graph(symmetric_subdigraph(sub)))
        if isinstance(umb, PigWitness):
            return DecompositionFailure(
                f"reflexive block is not proper interval ({umb.kind.value})",
                tuple(index[v] for v in umb.vertices),
            )
    return Decomposition(tuple(blocks[c] for c in order), tuple(kinds))


def compose_decomposition(H: Digraph, dec: Decomposition) -> Digraph:
    """Rebuild ``TT_k[S_1, ..., S_k]`` on ``H``'s labels from the blocks and ``H``'s in-block arcs."""
    arcs = set()
    for i, block in enumerate(dec.blocks):
        arcs.update((u, v) for u in block for v in block if H.has_arc(u, v))
        for later in dec.blocks[i + 1:]:
            arcs.update((u, v) for u in block for v in later)
    return Digraph(H.n, arcs)


def check_forward(H: Digraph, order: Sequence[int]) -> Optional[tuple[int, int]]:
    """First pair ``(order[a], order[b])``, ``a < b``, with no arc from the earlier to the later."""
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if not H.has_arc(order[a], order[b]):
                return (order[a], order[b])
    return None

