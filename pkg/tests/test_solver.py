import random
from itertools import product

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from minhom.classifier import PolynomialMinMax, classify_wpl
from minhom.core import (
    Digraph,
    all_semicomplete_wpl,
    complete_reflexive,
    complete_reflexive_minus_arc,
    digraph_w,
    directed_cycle,
    random_digraph,
    transitive_tournament,
)
from minhom.flow import FlowNetwork
from minhom.ordering import PreconditionViolated
from minhom.recognition import PatternKind
from minhom.solver import (
    INF,
    CostMatrix,
    NotPolynomial,
    build_network,
    hom_cost,
    solve,
    solve_bruteforce,
    solve_cycle,
    solve_minmax,
    threshold_cut_value,
    verify_hom,
)


def enumerate_optimum(H: Digraph, D: Digraph, costs: CostMatrix):
    """Minimum over every map V(D) -> V(H); ``None`` if no homomorphism."""
    best = None
    for f in product(range(H.n), repeat=D.n):
        if all(H.has_arc(f[u], f[v]) for u, v in D.arcs):
            c = hom_cost(costs, f)
            if c != INF and (best is None or c < best):
                best = c
    return best


def cost_of(res):
    return None if res is None else res.cost


def random_costs(rng, n, p, inf_prob=0.05):
    return CostMatrix([[None if rng.random() < inf_prob else rng.randint(0, 9) for _ in range(p)] for _ in range(n)])


ARC = Digraph(2, [(0, 1)])

MINMAX_TARGETS = [
    (H, c.ordering)
    for n in (1, 2, 3)
    for H in all_semicomplete_wpl(n)
    if isinstance(c := classify_wpl(H), PolynomialMinMax)
]


# --- cost matrices and homomorphism checks -----------------------------------------


def test_cost_matrix_json():
    m = CostMatrix([[0, None], [3, 4]])
    assert m[0][1] == INF
    assert CostMatrix.from_json(m.to_json()) == m
    assert m.to_json() == {"costs": [[0, None], [3, 4]]}
    with pytest.raises(ValueError, match=r"cost\[0\]\[0\]"):
        CostMatrix([[-1]])
    with pytest.raises(ValueError):
        CostMatrix([[1, 2], [3]])
    with pytest.raises(ValueError, match="expected 3x2"):
        m.check_shape(3, 2)


def test_verify_hom_examples():
    assert verify_hom(ARC, transitive_tournament(2), (0, 1)) is None
    assert verify_hom(ARC, transitive_tournament(2), (1, 0)) == (0, 1)
    looped = Digraph(2, [(0, 1), (0, 0)])
    for f in product(range(2), repeat=2):
        assert verify_hom(looped, transitive_tournament(2), f) is not None


# --- threshold network -------------------------------------------------------------


def test_network_slice_tables():
    net = build_network(transitive_tournament(3), (0, 1, 2), ARC, CostMatrix([[1, 1, 1], [1, 1, 1]]))
    assert net.qplus[1:] == [2, 3, None]
    assert net.rplus[1:] == [3, 3, None]
    assert net.chain_cost(0, 3) == INF  # vertex 0 has an out-arc
    assert net.chain_cost(1, 3) == 1
    net = build_network(complete_reflexive(2), (0, 1), ARC, CostMatrix([[0, 0], [0, 0]]))
    assert net.qplus[1:] == [1, 1] and net.rplus[1:] == [2, 2]


def test_network_single_colour():
    D = Digraph(3, [(0, 1), (1, 2)])
    net = build_network(complete_reflexive(1), (0,), D, CostMatrix([[4], [5], [6]]))
    assert net.n_nodes == 2
    chains = [(a, b) for a, b, _ in net.arcs if (a, b) == (net.SOURCE, net.SINK)]
    assert len(chains) == 3


def test_network_preconditions():
    D, costs = ARC, CostMatrix([[0] * 3, [0] * 3])
    with pytest.raises(PreconditionViolated):
        build_network(directed_cycle(3, range(3)), (0, 1, 2), D, costs)
    with pytest.raises(PreconditionViolated):
        build_network(complete_reflexive(3), (0, 1), D, costs)


def test_cut_matches_homomorphism_cost():
    rng = random.Random(3)
    for H, order in MINMAX_TARGETS:
        pos = {v: i + 1 for i, v in enumerate(order)}
        D = random_digraph(rng.randrange(10**6), 3, 0.5, 0.2)
        costs = random_costs(rng, 3, H.n, inf_prob=0.0)
        net = build_network(H, order, D, costs)
        for f in product(range(H.n), repeat=D.n):
            value = threshold_cut_value(net, [pos[c] for c in f])
            if verify_hom(D, H, f) is None:
                assert value == hom_cost(costs, f)
            else:
                assert value == INF


# --- solver examples ---------------------------------------------------------------


def test_minmax_examples():
    res = solve_minmax(transitive_tournament(2), (0, 1), ARC, CostMatrix([[5, 1], [1, 3]]))
    assert res.map == (0, 1) and res.cost == 8
    res = solve_minmax(complete_reflexive(2), (0, 1), ARC, CostMatrix([[0, 5], [5, 0]]))
    assert res.map == (0, 1) and res.cost == 0
    D = random_digraph(1, 5, 0.5, 0.3)
    res = solve_minmax(complete_reflexive(1), (0,), D, CostMatrix([[u + 2] for u in range(5)]))
    assert res.cost == sum(u + 2 for u in range(5))


def test_minmax_infeasible():
    # A loop in D has nowhere to go in a loopless target.
    D = Digraph(1, [(0, 0)])
    assert solve_minmax(transitive_tournament(2), (0, 1), D, CostMatrix([[0, 0]])) is None
    # Only infinite costs.
    assert solve_minmax(complete_reflexive(2), (0, 1), ARC, CostMatrix([[None, None], [0, 0]])) is None
    # A directed path longer than TT_2 allows.
    path = Digraph(3, [(0, 1), (1, 2)])
    assert solve_minmax(transitive_tournament(2), (0, 1), path, CostMatrix([[0, 0]] * 3)) is None


def test_cycle_examples():
    assert solve_cycle(3, Digraph(1), CostMatrix([[4, 1, 7]])).cost == 1
    assert solve_cycle(2, directed_cycle(3), CostMatrix([[0, 0]] * 3)) is None
    costs = CostMatrix([[1, 0, 0], [0, 0, 0], [0, 0, 0]])
    assert solve_cycle(3, directed_cycle(3), costs).cost == 0


def test_bruteforce_examples():
    assert solve_bruteforce(transitive_tournament(2), ARC, CostMatrix([[5, 1], [1, 3]])).cost == 8
    costs = CostMatrix([[3, 1, None], [None, 2, 5], [0, 0, 9]])
    assert solve_bruteforce(complete_reflexive(3), Digraph(3), costs).cost == 1 + 2 + 0
    assert solve_bruteforce(directed_cycle(3), directed_cycle(3), CostMatrix([[1, 0, 0], [0] * 3, [0] * 3])).cost == 0


def test_dispatch():
    res = solve(directed_cycle(2), Digraph(2, [(0, 1), (1, 0)]), CostMatrix([[1, 5], [2, 0]]))
    assert res.cost == 1 and verify_hom(Digraph(2, [(0, 1), (1, 0)]), directed_cycle(2), res.map) is None
    with pytest.raises(NotPolynomial) as err:
        solve(digraph_w(), ARC, CostMatrix([[0, 0], [0, 0]]))
    assert err.value.witness.kind is PatternKind.W
    assert solve(digraph_w(), ARC, CostMatrix([[0, 1], [1, 0]]), oracle=True).cost == 0


def test_dispatch_on_relabelled_cycle():
    # The cycle's vertex order differs from the labels: 0 -> 2 -> 1 -> 0.
    H = Digraph(3, [(0, 2), (2, 1), (1, 0)])
    rng = random.Random(9)
    for _ in range(100):
        D = random_digraph(rng.randrange(10**6), rng.randint(1, 5), 0.3)
        costs = random_costs(rng, D.n, 3)
        res = solve(H, D, costs)
        assert cost_of(res) == enumerate_optimum(H, D, costs)
        if res is not None:
            assert verify_hom(D, H, res.map) is None


# --- oracle equivalence -----------------------------------------------------------


def test_minmax_matches_enumeration():
    rng = random.Random(12)
    for H, order in MINMAX_TARGETS:
        for _ in range(15):
            D = random_digraph(rng.randrange(10**6), rng.randint(1, 4), 0.5, 0.2)
            costs = random_costs(rng, D.n, H.n)
            res = solve_minmax(H, order, D, costs)
            assert cost_of(res) == enumerate_optimum(H, D, costs)
            if res is not None:
                assert verify_hom(D, H, res.map) is None and hom_cost(costs, res.map) == res.cost


def test_backends_agree():
    rng = random.Random(13)
    H, order = complete_reflexive_minus_arc(), classify_wpl(complete_reflexive_minus_arc()).ordering
    for _ in range(100):
        D = random_digraph(rng.randrange(10**6), rng.randint(1, 8), 0.4, 0.2)
        costs = random_costs(rng, D.n, 3)
        a = solve_minmax(H, order, D, costs, backend="scipy")
        b = solve_minmax(H, order, D, costs, backend="dinic")
        assert cost_of(a) == cost_of(b)


def test_huge_costs_fall_back_to_exact_dinic():
    big = 10**15
    costs = CostMatrix([[big, big + 1], [big + 2, big]])
    res = solve_minmax(complete_reflexive(2), (0, 1), ARC, costs)
    assert res.cost == 2 * big


def test_cycle_matches_enumeration():
    rng = random.Random(14)
    for k in (2, 3):
        for _ in range(150):
            D = random_digraph(rng.randrange(10**6), rng.randint(1, 6), 0.3)
            costs = random_costs(rng, D.n, k)
            assert cost_of(solve_cycle(k, D, costs)) == enumerate_optimum(directed_cycle(k), D, costs)


def test_cost_shift_covariance():
    rng = random.Random(15)
    H = complete_reflexive_minus_arc()
    order = classify_wpl(H).ordering
    for _ in range(100):
        D = random_digraph(rng.randrange(10**6), rng.randint(1, 6), 0.4, 0.2)
        costs = random_costs(rng, D.n, 3)
        u, delta = rng.randrange(D.n), rng.randint(1, 20)
        rows = [list(r) for r in costs.rows]
        rows[u] = [c + delta for c in rows[u]]
        shifted = CostMatrix(rows)
        base = cost_of(solve_minmax(H, order, D, costs))
        expected = None if base is None else base + delta
        assert cost_of(solve_minmax(H, order, D, shifted)) == expected
        assert cost_of(solve_bruteforce(H, D, shifted)) == expected


@settings(max_examples=150, deadline=None)
@given(
    target=st.integers(0, len(MINMAX_TARGETS) - 1),
    n=st.integers(1, 4),
    data=st.data(),
)
def test_minmax_property(target, n, data):
    H, order = MINMAX_TARGETS[target]
    arcs = data.draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=8))
    cost = st.one_of(st.none(), st.integers(0, 9))
    rows = data.draw(st.lists(st.lists(cost, min_size=H.n, max_size=H.n), min_size=n, max_size=n))
    D, costs = Digraph(n, arcs), CostMatrix(rows)
    assert cost_of(solve_minmax(H, order, D, costs)) == enumerate_optimum(H, D, costs)


# --- max flow against networkx ------------------------------------------------------


@pytest.mark.parametrize("backend", ["scipy", "dinic"])
def test_max_flow_matches_networkx(backend):
    rng = random.Random(16)
    for _ in range(60):
        n = rng.randint(2, 12)
        net, G = FlowNetwork(n), nx.DiGraph()
        G.add_nodes_from(range(n))
        for _ in range(rng.randint(0, 40)):
            u, v = rng.randrange(n), rng.randrange(n)
            if u == v:
                continue
            cap = rng.randint(0, 20)
            net.add_edge(u, v, cap)
            if G.has_edge(u, v):
                G[u][v]["capacity"] += cap
            else:
                G.add_edge(u, v, capacity=cap)
        value = net.max_flow(0, n - 1, backend=backend)
        assert value == nx.maximum_flow_value(G, 0, n - 1)
        side = net.source_side(0)
        assert 0 in side and n - 1 not in side
        cut = sum(d["capacity"] for u, v, d in G.edges(data=True) if u in side and v not in side)
        assert cut == value
