import random

import pytest

from minhom.classifier import (
    ITransitivityFailure,
    LooplessCycleNotCk,
    LWithCycleCoexistence,
    NotReflexiveSemicomplete,
    NotSemicompleteWpl,
    NPHard,
    PolynomialCycle,
    PolynomialMinMax,
    classify_reflexive,
    classify_via_composition,
    classify_wpl,
    is_polynomial,
    verdict_name,
    verify_classification,
    verify_witness,
)
from minhom.core import (
    Digraph,
    complete_reflexive,
    complete_reflexive_minus_arc,
    converse,
    digraph_r,
    digraph_r_prime,
    digraph_w,
    directed_cycle,
    induced,
    random_semicomplete_wpl,
    relabel,
    transitive_tournament,
)
from minhom.recognition import PatternHit, PatternKind, PigWitness


def test_cycles():
    c = classify_wpl(directed_cycle(3))
    assert isinstance(c, PolynomialCycle) and c.k == 3
    assert classify_wpl(directed_cycle(2)) == PolynomialCycle(2, (0, 1))
    c = classify_wpl(relabel(directed_cycle(3), [2, 0, 1]))
    assert c.k == 3 and verify_classification(relabel(directed_cycle(3), [2, 0, 1]), c)


def test_hard_named_targets():
    c = classify_wpl(digraph_w())
    assert isinstance(c, NPHard) and c.witness.kind is PatternKind.W
    assert classify_wpl(digraph_r_prime()).witness.kind is PatternKind.R_PRIME
    assert classify_wpl(digraph_r()).witness.kind is PatternKind.R
    assert classify_reflexive(digraph_r()).witness.kind is PatternKind.R
    assert classify_reflexive(directed_cycle(3, range(3))).witness.kind is PatternKind.REFLEXIVE_C3


def test_polynomial_named_targets():
    for H in (complete_reflexive(3), complete_reflexive_minus_arc(), transitive_tournament(4)):
        c = classify_wpl(H)
        assert isinstance(c, PolynomialMinMax) and verify_classification(H, c)
        assert classify_via_composition(H)
    assert isinstance(classify_reflexive(complete_reflexive(3)), PolynomialMinMax)
    assert not classify_via_composition(directed_cycle(3, range(3)))


def test_loopless_part_witnesses():
    # Loopless 2-cycle plus a third loopless vertex.
    H = Digraph(3, [(0, 1), (1, 0), (0, 2), (1, 2)])
    c = classify_wpl(H)
    assert isinstance(c.witness, LooplessCycleNotCk) and verify_witness(H, c.witness)
    # Loopless 3-cycle plus a fourth loopless vertex.
    H = Digraph(4, list(directed_cycle(3).arcs) + [(3, v) for v in range(3)])
    c = classify_wpl(H)
    assert isinstance(c.witness, ITransitivityFailure) and verify_witness(H, c.witness)
    # Loopless 2-cycle beside a looped vertex dominating both.
    H = Digraph(3, [(0, 1), (1, 0), (2, 0), (2, 1), (2, 2)])
    c = classify_wpl(H)
    assert not is_polynomial(c) and verify_witness(H, c.witness)


def test_pig_witness_for_reflexive_claw():
    # A reflexive claw in the symmetric part; the leaves are pairwise one-way.
    arcs = [(v, v) for v in range(4)] + [(0, i) for i in (1, 2, 3)] + [(i, 0) for i in (1, 2, 3)]
    arcs += [(1, 2), (2, 3), (1, 3)]
    H = Digraph(4, arcs)
    c = classify_reflexive(H)
    assert isinstance(c.witness, PigWitness) and verify_witness(H, c.witness)


def test_bad_input():
    with pytest.raises(NotSemicompleteWpl):
        classify_wpl(Digraph(2))
    with pytest.raises(NotReflexiveSemicomplete):
        classify_reflexive(transitive_tournament(2))


def test_tampered_certificates_rejected():
    H = complete_reflexive(3)
    assert not verify_classification(H, NPHard(PatternHit(PatternKind.R, (0, 1, 2), ()), "x"))
    assert not verify_classification(digraph_r(), PolynomialMinMax((0, 1, 2)))
    assert not verify_classification(directed_cycle(3), PolynomialCycle(3, (0, 2, 1)))
    assert not verify_witness(transitive_tournament(3), LooplessCycleNotCk((0, 1), 2))
    assert not verify_witness(transitive_tournament(4), ITransitivityFailure((0, 1, 2), 3))
    assert not verify_witness(directed_cycle(3), LWithCycleCoexistence((0, 1, 2), 0))


def _samples(count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_semicomplete_wpl(rng.randrange(10**6), rng.randint(1, 7), rng.random(), rng.random())


def test_certificates_sound():
    for H in _samples(400, 21):
        c = classify_wpl(H)
        assert verify_classification(H, c), H
        assert is_polynomial(c) == classify_via_composition(H)


def test_invariant_under_relabelling_and_converse():
    rng = random.Random(4)
    for H in _samples(300, 22):
        kind = verdict_name(classify_wpl(H))
        perm = list(range(H.n))
        rng.shuffle(perm)
        assert verdict_name(classify_wpl(relabel(H, perm))) == kind
        # Reversing every arc of H and D maps instances to instances.
        assert is_polynomial(classify_wpl(converse(H))) == (kind != "np_hard")


def test_reflexive_classifier_agrees_with_general():
    rng = random.Random(6)
    for _ in range(200):
        H = random_semicomplete_wpl(rng.randrange(10**6), rng.randint(1, 7), rng.random(), 1.0)
        a, b = classify_reflexive(H), classify_wpl(H)
        assert is_polynomial(a) == is_polynomial(b)
        assert verify_classification(H, a)


def _witness_vertices(w) -> tuple[int, ...]:
    if isinstance(w, (PatternHit, PigWitness)):
        return w.vertices
    if isinstance(w, LooplessCycleNotCk):
        return w.cycle + (w.extra,)
    if isinstance(w, ITransitivityFailure):
        return w.triple + (w.extra,)
    return w.cycle + (w.loop_vertex,)


def test_hardness_is_inherited_by_witness_subdigraph():
    # Each witness's vertex set induces a target the classifier also calls hard.
    for H in _samples(300, 23):
        c = classify_wpl(H)
        if isinstance(c, NPHard):
            sub, _ = induced(H, _witness_vertices(c.witness))
            assert not is_polynomial(classify_wpl(sub)), (H, c.witness)
