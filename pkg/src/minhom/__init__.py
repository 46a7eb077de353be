"""Minimum cost homomorphisms to semicomplete digraphs with possible loops.

Classifies MinHOM(H) as polynomial or NP-hard with a checkable certificate,
and solves the polynomial cases exactly.
"""

from minhom.classifier import (
    NPHard,
    PolynomialCycle,
    PolynomialMinMax,
    classify_reflexive,
    classify_via_composition,
    classify_wpl,
    verify_classification,
)
from minhom.core import Digraph, Graph
from minhom.ordering import build_minmax_wpl, check_minmax
from minhom.recognition import find_pig_witness, umbrella_ordering
from minhom.reductions import UndirectedGraph, reduce_mis_gadget, reduce_mis_rprime
from minhom.solver import (
    INF,
    CostMatrix,
    Homomorphism,
    NotPolynomial,
    solve,
    solve_bruteforce,
    solve_cycle,
    solve_minmax,
)

__all__ = [
    "INF",
    "CostMatrix",
    "Digraph",
    "Graph",
    "Homomorphism",
    "NPHard",
    "NotPolynomial",
    "PolynomialCycle",
    "PolynomialMinMax",
    "UndirectedGraph",
    "build_minmax_wpl",
    "check_minmax",
    "classify_reflexive",
    "classify_via_composition",
    "classify_wpl",
    "find_pig_witness",
    "reduce_mis_gadget",
    "reduce_mis_rprime",
    "solve",
    "solve_bruteforce",
    "solve_cycle",
    "solve_minmax",
    "umbrella_ordering",
    "verify_classification",
]
