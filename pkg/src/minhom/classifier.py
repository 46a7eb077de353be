"""Polynomial / NP-hard verdicts for MinHOM(H), each with a checkable certificate."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Optional, Union

from minhom.core import (
    Digraph,
    induced,
    is_semicomplete_wpl,
    loop_split,
    symmetric_subdigraph,
    underlying_graph,
)
from minhom.ordering import (
    DecompositionFailure,
    build_minmax_wpl,
    check_minmax,
    decompose_tt_composition,
    slices_are_intervals,
)
from minhom.recognition import (
    PatternHit,
    PatternKind,
    PigWitness,
    find_patterns,
    is_transitive_tournament,
    umbrella_ordering,
    verify_pattern_hit,
    verify_pig_witness,
)


class NotSemicompleteWpl(ValueError):
    pass


class NotReflexiveSemicomplete(ValueError):
    pass


@dataclass(frozen=True)
class LooplessCycleNotCk:
    """A 2-cycle among loopless vertices plus a third loopless vertex."""

    cycle: tuple[int, int]
    extra: int


@dataclass(frozen=True)
class ITransitivityFailure:
    """A directed 3-cycle among loopless vertices plus a fourth loopless vertex."""

    triple: tuple[int, int, int]
    extra: int


@dataclass(frozen=True)
class LWithCycleCoexistence:
    """The loopless part is exactly this cycle while a looped vertex exists."""

    cycle: tuple[int, ...]
    loop_vertex: int


HardnessWitness = Union[
    PatternHit, PigWitness, LooplessCycleNotCk, ITransitivityFailure, LWithCycleCoexistence
]


@dataclass(frozen=True)
class PolynomialCycle:
    k: int
    cycle: tuple[int, ...]  # vertices in arc order: cycle[i] -> cycle[i+1]


@dataclass(frozen=True)
class PolynomialMinMax:
    ordering: tuple[int, ...]


@dataclass(frozen=True)
class NPHard:
    witness: HardnessWitness
    reason: str


Classification = Union[PolynomialCycle, PolynomialMinMax, NPHard]


def is_polynomial(c: Classification) -> bool:
    return not isinstance(c, NPHard)


def verdict_name(c: Classification) -> str:
    if isinstance(c, PolynomialCycle):
        return "polynomial_cycle"
    if isinstance(c, PolynomialMinMax):
        return "polynomial_minmax"
    return "np_hard"


def as_directed_cycle(H: Digraph) -> Optional[tuple[int, ...]]:
    """Vertices of ``H`` in cycle order if ``H`` is loopless ``C_2`` or ``C_3``."""
    if H.n not in (2, 3) or len(H.arcs) != H.n or H.loops():
        return None
    cycle = [0]
    for _ in range(H.n - 1):
        out = H.out_neighbors(cycle[-1])
        if len(out) != 1 or next(iter(out)) in cycle:
            return None
        cycle.append(next(iter(out)))
    if not H.has_arc(cycle[-1], cycle[0]):
        return None
    return tuple(cycle)


def _loopless_cycle_witness(H: Digraph, free: list[int], has_loops: bool):
    """Witness for a loopless part that is not a transitive tournament."""
    two_cycle = next(((a, b) for a, b in combinations(free, 2) if H.has_arc(a, b) and H.has_arc(b, a)), None)
    if two_cycle is not None:
        others = [v for v in free if v not in two_cycle]
        if others:
            return LooplessCycleNotCk(two_cycle, others[0]), "loopless part has a 2-cycle and another vertex"
        loop_vertex = min(v for v in range(H.n) if H.has_loop(v))
        return (
            LWithCycleCoexistence(two_cycle, loop_vertex),
            "loopless part is a 2-cycle while looped vertices exist",
        )
    for a, b, c in combinations(free, 3):
        for x, y, z in ((a, b, c), (a, c, b)):
            if H.has_arc(x, y) and H.has_arc(y, z) and H.has_arc(z, x):
                others = [v for v in free if v not in (a, b, c)]
                if others:
                    return (
                        ITransitivityFailure((x, y, z), others[0]),
                        "loopless part has a 3-cycle and another vertex",
                    )
                assert has_loops
                loop_vertex = min(v for v in range(H.n) if H.has_loop(v))
                return (
                    LWithCycleCoexistence((x, y, z), loop_vertex),
                    "loopless part is a 3-cycle while looped vertices exist",
                )
    raise AssertionError("non-transitive loopless part without a short cycle")


def _reflexive_part_witness(H: Digraph, L: frozenset[int]) -> Optional[NPHard]:
    hits = find_patterns(H, [PatternKind.R, PatternKind.REFLEXIVE_C3], within=L)
    for kind in (PatternKind.R, PatternKind.REFLEXIVE_C3):
        if kind in hits:
            return NPHard(hits[kind], f"looped part contains induced {kind.value}")
    sub, index = induced(symmetric_subdigraph(H), L)
    umb = umbrella_ordering(underlying_graph(sub))
    if isinstance(umb, PigWitness):
        mapped = PigWitness(umb.kind, tuple(index[v] for v in umb.vertices))
        return NPHard(mapped, f"symmetric looped part is not proper interval ({umb.kind.value})")
    return None


def classify_wpl(H: Digraph) -> Classification:
    """Dichotomy verdict for a semicomplete digraph with possible loops."""
    if H.n < 1 or not is_semicomplete_wpl(H):
        raise NotSemicompleteWpl("H must be a nonempty semicomplete digraph with possible loops")
    cycle = as_directed_cycle(H)
    if cycle is not None:
        return PolynomialCycle(len(cycle), cycle)

    hits = find_patterns(H, [PatternKind.W, PatternKind.R_PRIME, PatternKind.LOOPLESS_C3_WITH_LOOPS])
    for kind in (PatternKind.W, PatternKind.R_PRIME, PatternKind.LOOPLESS_C3_WITH_LOOPS):
        if kind in hits:
            return NPHard(hits[kind], f"contains induced {kind.value}")

    split = loop_split(H)
    free = sorted(split.free_vertices)
    I_sub, _ = induced(H, free)
    if is_transitive_tournament(I_sub) is None:
        witness, reason = _loopless_cycle_witness(H, free, bool(split.loop_vertices))
        return NPHard(witness, reason)

    hard = _reflexive_part_witness(H, split.loop_vertices)
    if hard is not None:
        return hard
    return PolynomialMinMax(build_minmax_wpl(H))


def classify_reflexive(H: Digraph) -> Classification:
    """Dichotomy verdict for a reflexive semicomplete digraph."""
    if H.n < 1 or not is_semicomplete_wpl(H) or len(H.loops()) != H.n:
        raise NotReflexiveSemicomplete("H must be a nonempty reflexive semicomplete digraph")
    hard = _reflexive_part_witness(H, H.loops())
    if hard is not None:
        return hard
    return PolynomialMinMax(build_minmax_wpl(H))


def classify_via_composition(H: Digraph) -> bool:
    """Polynomial flag from the composition characterisation; independent of :func:`classify_wpl`."""
    if not is_semicomplete_wpl(H):
        raise NotSemicompleteWpl("H must be a semicomplete digraph with possible loops")
    if as_directed_cycle(H) is not None:
        return True
    return not isinstance(decompose_tt_composition(H), DecompositionFailure)


def _is_c2_or_c3(D: Digraph, vs: tuple[int, ...]) -> bool:
    sub, _ = induced(D, vs)
    return as_directed_cycle(sub) is not None


def _loopless_semicomplete_with_cycle(H: Digraph, vs: tuple[int, ...]) -> bool:
    sub, _ = induced(H, vs)
    return (
        not sub.loops()
        and is_semicomplete_wpl(sub)
        and is_transitive_tournament(sub) is None
        and as_directed_cycle(sub) is None
    )


def verify_witness(H: Digraph, witness: HardnessWitness) -> bool:
    """Re-check a hardness witness structurally on ``H``.

    Every witness names a small vertex set whose induced subdigraph is itself
    NP-hard, which is enough because hardness passes to supergraphs.
    """
    n = H.n
    if isinstance(witness, PatternHit):
        return verify_pattern_hit(H, witness)
    if isinstance(witness, PigWitness):
        if not all(0 <= v < n and H.has_loop(v) for v in witness.vertices):
            return False
        return verify_pig_witness(underlying_graph(symmetric_subdigraph(H)), witness)
    if isinstance(witness, LooplessCycleNotCk):
        vs = tuple(witness.cycle) + (witness.extra,)
        if len(set(vs)) != 3 or not all(0 <= v < n for v in vs):
            return False
        a, b = witness.cycle
        return H.has_arc(a, b) and H.has_arc(b, a) and _loopless_semicomplete_with_cycle(H, vs)
    if isinstance(witness, ITransitivityFailure):
        vs = tuple(witness.triple) + (witness.extra,)
        if len(set(vs)) != 4 or not all(0 <= v < n for v in vs):
            return False
        x, y, z = witness.triple
        cyclic = H.has_arc(x, y) and H.has_arc(y, z) and H.has_arc(z, x)
        return cyclic and _loopless_semicomplete_with_cycle(H, vs)
    if isinstance(witness, LWithCycleCoexistence):
        vs = tuple(witness.cycle)
        if not all(0 <= v < n for v in vs + (witness.loop_vertex,)):
            return False
        if witness.loop_vertex in vs or not H.has_loop(witness.loop_vertex):
            return False
        return _is_c2_or_c3(H, vs) and is_semicomplete_wpl(induced(H, vs + (witness.loop_vertex,))[0])
    return False


def verify_classification(H: Digraph, c: Classification) -> bool:
    """Re-check the certificate carried by a verdict."""
    if isinstance(c, PolynomialCycle):
        if c.k not in (2, 3) or len(c.cycle) != c.k or sorted(c.cycle) != list(range(H.n)):
            return False
        expected = {(c.cycle[i], c.cycle[(i + 1) % c.k]) for i in range(c.k)}
        return H.arcs == expected
    if isinstance(c, PolynomialMinMax):
        order = c.ordering
        if sorted(order) != list(range(H.n)):
            return False
        return check_minmax(H, order) is None and slices_are_intervals(H, order)
    if isinstance(c, NPHard):
        return verify_witness(H, c.witness)
    return False


def same_verdict_kind(a: Classification, b: Classification) -> bool:
    return verdict_name(a) == verdict_name(b)


def brute_force_minmax_exists(H: Digraph) -> bool:
    """Whether any Min-Max ordering exists (tiny ``H`` only)."""
    return any(check_minmax(H, perm) is None for perm in permutations(range(H.n)))

