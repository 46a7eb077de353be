"""Acceptance suites, shared by the test suite and ``minhom selftest``.

Each ``criterion_N`` returns a :class:`CriterionResult`. ``scale`` multiplies
the sampled instance counts; exhaustive enumerations always run in full.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import combinations

from minhom.classifier import (
    NPHard,
    PolynomialCycle,
    PolynomialMinMax,
    classify_via_composition,
    classify_wpl,
    is_polynomial,
    verify_classification,
)
from minhom.core import (
    Digraph,
    all_semicomplete_wpl,
    complete_reflexive,
    complete_reflexive_minus_arc,
    digraph_r,
    digraph_r_prime,
    digraph_w,
    directed_cycle,
    induced,
    random_digraph,
    random_semicomplete_wpl,
)
from minhom.ordering import check_minmax, slices_are_intervals
from minhom.recognition import (
    PigWitness,
    check_umbrella,
    find_pig_witness,
    reflexive_graph,
    umbrella_ordering,
    verify_pig_witness,
)
from minhom.reductions import (
    all_graphs,
    complete_graph,
    extract_independent_set,
    mis_bruteforce,
    path_graph,
    random_graph,
    reduce_mis_gadget,
    reduce_mis_rprime,
    star_graph,
)
from minhom.solver import CostMatrix, hom_cost, solve, solve_bruteforce, solve_cycle, solve_minmax, verify_hom


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    seconds: float
    limit: float
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"[{status}] criterion {self.number}: {self.title} ({self.checked} checks, {self.seconds:.2f}s / {self.limit:.0f}s)"
        if self.failures:
            text += f"; first failure: {self.failures[0]}"
        return text


class _Run:
    """Collects checks and failures for one criterion."""

    def __init__(self, number: int, title: str, limit: float):
        self.number, self.title, self.limit = number, title, limit
        self.checked = 0
        self.failures: list[str] = []
        self.start = time.perf_counter()

    def check(self, ok: bool, message: str) -> bool:
        self.checked += 1
        if not ok:
            self.failures.append(message)
        return ok

    def finish(self, within_time: bool = True) -> CriterionResult:
        elapsed = time.perf_counter() - self.start
        timely = elapsed < self.limit or not within_time
        if not timely:
            self.failures.append(f"took {elapsed:.2f}s, limit {self.limit}s")
        return CriterionResult(
            self.number, self.title, not self.failures, elapsed, self.limit, self.checked, self.failures
        )


def _count(n: int, scale: float) -> int:
    return max(1, round(n * scale))


def random_costs(rng: random.Random, n: int, p: int, inf_prob: float = 0.05, high: int = 9) -> CostMatrix:
    return CostMatrix([[None if rng.random() < inf_prob else rng.randint(0, high) for _ in range(p)] for _ in range(n)])


def _cost(res):
    return None if res is None else res.cost


# --- 1. exhaustive small targets -------------------------------------------------

NAMED_VERDICTS = [
    ("C_2", directed_cycle(2), "polynomial_cycle"),
    ("C_3", directed_cycle(3), "polynomial_cycle"),
    ("C*_3", directed_cycle(3, range(3)), "np_hard"),
    ("W", digraph_w(), "np_hard"),
    ("R", digraph_r(), "np_hard"),
    ("R'", digraph_r_prime(), "np_hard"),
    ("R' with loop", digraph_r_prime(loop_at_first=True), "np_hard"),
    ("K*_3", complete_reflexive(3), "polynomial_minmax"),
    ("K*_3-e", complete_reflexive_minus_arc(), "polynomial_minmax"),
]


def _verdict(c) -> str:
    if isinstance(c, PolynomialCycle):
        return "polynomial_cycle"
    if isinstance(c, PolynomialMinMax):
        return "polynomial_minmax"
    return "np_hard"


def small_targets(max_n: int = 3) -> list[Digraph]:
    return [H for n in range(1, max_n + 1) for H in all_semicomplete_wpl(n)]


def criterion_1(scale: float = 1.0) -> CriterionResult:
    run = _Run(1, "exhaustive dichotomy n<=3 and named verdicts", 10.0)
    for H in small_targets(3):
        c = classify_wpl(H)
        run.check(is_polynomial(c) == classify_via_composition(H), f"disagreement on {H}")
        run.check(verify_classification(H, c), f"certificate rejected on {H}")
    for name, H, expected in NAMED_VERDICTS:
        got = _verdict(classify_wpl(H))
        run.check(got == expected, f"{name}: expected {expected}, got {got}")
        run.check((expected != "np_hard") == classify_via_composition(H), f"{name}: composition test disagrees")
    return run.finish()


# --- 2. sampled agreement -------------------------------------------------------

SYM_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
LOOP_GRID = (0.0, 0.5, 0.8, 1.0)


def sampled_targets(count: int = 400, seed: int = 2024) -> list[Digraph]:
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = (4, 5, 6)[i % 3]
        sym = SYM_GRID[(i // 3) % len(SYM_GRID)]
        loop = LOOP_GRID[(i // (3 * len(SYM_GRID))) % len(LOOP_GRID)]
        out.append(random_semicomplete_wpl(rng.randrange(2**32), n, sym, loop))
    return out


def criterion_2(scale: float = 1.0) -> CriterionResult:
    run = _Run(2, "sampled agreement n in {4,5,6}", 30.0)
    for H in sampled_targets(_count(400, scale)):
        c = classify_wpl(H)
        run.check(is_polynomial(c) == classify_via_composition(H), f"disagreement on {H}")
        if isinstance(c, PolynomialMinMax):
            ok = check_minmax(H, c.ordering) is None and slices_are_intervals(H, c.ordering)
            run.check(ok, f"bad ordering {c.ordering} for {H}")
        else:
            run.check(verify_classification(H, c), f"certificate rejected on {H}")
    return run.finish()


# --- 3. min-cut solver against the oracle -----------------------------------------


def minmax_targets(scale: float = 1.0) -> list[tuple[Digraph, tuple[int, ...]]]:
    out = []
    for H in small_targets(3) + sampled_targets(_count(400, scale)):
        c = classify_wpl(H)
        if isinstance(c, PolynomialMinMax):
            out.append((H, c.ordering))
    return out


def criterion_3(scale: float = 1.0, per_target: int = 100, seed: int = 3) -> CriterionResult:
    run = _Run(3, "min-cut solver equals exhaustive oracle", 120.0)
    targets = minmax_targets(scale)
    rng = random.Random(seed)
    per = _count(per_target, scale)
    for H, order in targets:
        for _ in range(per):
            D = random_digraph(rng.randrange(2**32), rng.randint(1, 6), 0.5, 0.2)
            costs = random_costs(rng, D.n, H.n)
            fast = _cost(solve_minmax(H, order, D, costs))
            slow = _cost(solve_bruteforce(H, D, costs))
            run.check(fast == slow, f"H={H} D={D} costs={costs.rows}: cut {fast}, oracle {slow}")
    if scale >= 1.0:
        run.check(run.checked >= 10_000, f"only {run.checked} comparisons")
    return run.finish()


# --- 4. directed cycles -----------------------------------------------------------


def cycle_preimage(rng: random.Random, k: int, n: int, arc_prob: float = 0.6) -> Digraph:
    """Random digraph with a homomorphism to ``C_k``."""
    colour = [rng.randrange(k) for _ in range(n)]
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and colour[v] == (colour[u] + 1) % k]
    return Digraph(n, [a for a in arcs if rng.random() < arc_prob])


def criterion_4(scale: float = 1.0, seed: int = 4) -> CriterionResult:
    run = _Run(4, "cycle solver equals oracle", 30.0)
    rng = random.Random(seed)
    for k in (2, 3):
        H = directed_cycle(k)
        for i in range(_count(500, scale)):
            n = rng.randint(1, 8)
            if i % 2:
                D = cycle_preimage(rng, k, n)
            else:
                D = random_digraph(rng.randrange(2**32), n, 0.25)
            costs = random_costs(rng, n, k)
            got = solve_cycle(k, D, costs)
            want = solve_bruteforce(H, D, costs)
            run.check(_cost(got) == _cost(want), f"k={k} D={D}: {_cost(got)} vs {_cost(want)}")
            if got is not None:
                run.check(verify_hom(D, H, got.map) is None and hom_cost(costs, got.map) == got.cost,
                          f"k={k} D={D}: returned map invalid")
            # Rotating colours by r relabels every homomorphism.
            r = rng.randrange(k)
            rotated = CostMatrix([[row[(j - r) % k] for j in range(k)] for row in costs.rows])
            run.check(_cost(solve_cycle(k, D, rotated)) == _cost(got), f"k={k} D={D}: rotation changed cost")
            # A constant added to one row shifts the optimum by that constant.
            u, shift = rng.randrange(n), rng.randint(1, 5)
            rows = [list(row) for row in costs.rows]
            rows[u] = [c + shift for c in rows[u]]
            shifted = _cost(solve_cycle(k, D, CostMatrix(rows)))
            expected = None if got is None else got.cost + shift
            run.check(shifted == expected, f"k={k} D={D}: cost shift gave {shifted}, expected {expected}")
    for length in (3, 5, 7):
        D = directed_cycle(length)
        costs = CostMatrix([[0, 0]] * length)
        run.check(solve_cycle(2, D, costs) is None, f"odd cycle C_{length} mapped to C_2")
    return run.finish()


# --- 5. reductions ---------------------------------------------------------------


def _check_reduction(run: _Run, inst, budget: int = 20_000_000) -> None:
    G = inst.G
    alpha, _ = mis_bruteforce(G)
    res = solve_bruteforce(inst.H, inst.D, inst.costs, node_budget=budget)
    expected = 4 * G.n - alpha if inst.tag == "rprime" else G.n - alpha
    label = f"{inst.tag} G={G}"
    if not run.check(res is not None and res.cost == expected, f"{label}: cost {_cost(res)}, expected {expected}"):
        return
    S = extract_independent_set(inst, res)
    run.check(G.is_independent(S) and len(S) == alpha, f"{label}: extracted {sorted(S)}, alpha={alpha}")


def criterion_5(scale: float = 1.0, seed: int = 5) -> CriterionResult:
    run = _Run(5, "reduction identities", 300.0)
    rng = random.Random(seed)
    graphs = [G for n in range(1, 5) for G in all_graphs(n)]
    graphs += [random_graph(rng.randrange(2**32), rng.randint(1, 7), rng.random()) for _ in range(_count(100, scale))]
    for G in graphs:
        for loop in (False, True):
            _check_reduction(run, reduce_mis_rprime(G, loop_at_1=loop))
    for G in (complete_graph(2), path_graph(3), complete_graph(3), star_graph(3)):
        _check_reduction(run, reduce_mis_gadget(G))
    return run.finish()


# --- 6. proper interval recognition ----------------------------------------------


def all_reflexive_graphs(n: int):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield reflexive_graph(n, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def random_reflexive_graph(rng: random.Random, n: int, edge_prob: float):
    return reflexive_graph(n, [e for e in combinations(range(n), 2) if rng.random() < edge_prob])


def criterion_6(scale: float = 1.0, seed: int = 6) -> CriterionResult:
    run = _Run(6, "umbrella ordering iff no forbidden subgraph", 60.0)
    rng = random.Random(seed)
    graphs = [G for n in range(1, 6) for G in all_reflexive_graphs(n)]
    graphs += [random_reflexive_graph(rng, rng.choice((6, 7)), rng.random()) for _ in range(_count(2000, scale))]
    for G in graphs:
        umb = umbrella_ordering(G)
        pig = find_pig_witness(G)
        ok = isinstance(umb, PigWitness) == (pig is not None)
        if not run.check(ok, f"{G}: ordering/witness disagree"):
            continue
        if isinstance(umb, PigWitness):
            run.check(verify_pig_witness(G, umb) and verify_pig_witness(G, pig), f"{G}: witness rejected")
        else:
            run.check(check_umbrella(G, umb) is None, f"{G}: ordering {umb} is not an umbrella ordering")
    return run.finish()


# --- 7. scale ---------------------------------------------------------------------


def scale_instance(seed: int = 7, n: int = 2000, m: int = 10_000, p: int = 10):
    """Polynomial target on ``p`` vertices with a feasible random input."""
    rng = random.Random(seed)
    H = Digraph(p, [(i, j) for i in range(p) for j in range(p) if i <= j or j == i - 1])
    arcs: set[tuple[int, int]] = set()
    while len(arcs) < m:
        u, v = rng.randrange(n), rng.randrange(n)
        if u != v:
            arcs.add((u, v))
    return H, Digraph(n, arcs), random_costs(rng, n, p, inf_prob=0.05)


def criterion_7(scale: float = 1.0, seed: int = 7) -> CriterionResult:
    run = _Run(7, "scale smoke test", 12.0)
    rng = random.Random(seed)
    H = random_semicomplete_wpl(rng.randrange(2**32), 100, 0.5, 0.5)
    t = time.perf_counter()
    c = classify_wpl(H)
    took = time.perf_counter() - t
    run.check(took < 2.0, f"classifying 100 vertices took {took:.2f}s")
    run.check(verify_classification(H, c), "100-vertex certificate rejected")

    H, D, costs = scale_instance(seed)
    t = time.perf_counter()
    res = solve(H, D, costs)
    took = time.perf_counter() - t
    run.check(took < 10.0, f"solving |V(D)|={D.n} took {took:.2f}s")
    if res is not None:
        run.check(verify_hom(D, H, res.map) is None and hom_cost(costs, res.map) == res.cost,
                  "scale solution is not a homomorphism of the stated cost")

    sub, index = induced(D, range(6))
    sub_costs = CostMatrix([costs[u] for u in index])
    run.check(_cost(solve(H, sub, sub_costs)) == _cost(solve_bruteforce(H, sub, sub_costs)),
              "6-vertex spot check disagrees with the oracle")
    return run.finish(within_time=False)


CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7)


def run_all(scale: float = 1.0) -> list[CriterionResult]:
    return [crit(scale) for crit in CRITERIA]
