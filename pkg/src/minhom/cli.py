"""``minhom`` command-line front end.

Exit codes: 0 success, 1 infeasible / NP-hard without a solve / rejected
certificate, 2 usage or input error, 3 internal verification failure.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from minhom.classifier import (
    NotSemicompleteWpl,
    PolynomialCycle,
    PolynomialMinMax,
    classify_wpl,
    verify_classification,
)
from minhom.core import Digraph, random_digraph, random_semicomplete_wpl
from minhom.ordering import check_minmax, slices_are_intervals
from minhom.reductions import ReductionInstance, UndirectedGraph, reduce_mis_gadget, reduce_mis_rprime
from minhom.report import (
    FormatError,
    classification_from_json,
    classification_to_json,
    dumps,
    read_json,
    write_json,
)
from minhom.solver import (
    BudgetExceeded,
    CostMatrix,
    InternalInconsistency,
    NotPolynomial,
    hom_cost,
    solve,
    verify_hom,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _load(path: Optional[str], flag: str, parse: Callable):
    if path is None:
        raise UsageError(f"missing required flag {flag}")
    obj = read_json(path)
    try:
        return parse(obj)
    except (ValueError, TypeError, KeyError) as exc:
        raise FormatError(f"{path}: {exc}") from exc


def _load_h(args) -> Digraph:
    return _load(args.h, "--h", Digraph.from_json)


def _load_instance(args) -> tuple[Digraph, Digraph, CostMatrix]:
    H = _load_h(args)
    D = _load(args.d, "--d", Digraph.from_json)
    costs = _load(args.costs, "--costs", CostMatrix.from_json)
    try:
        costs.check_shape(D.n, H.n)
    except ValueError as exc:
        raise FormatError(f"{args.costs}: field 'costs': {exc}") from exc
    return H, D, costs


def _classify_checked(H: Digraph, path: str):
    try:
        verdict = classify_wpl(H)
    except NotSemicompleteWpl as exc:
        raise FormatError(f"{path}: {exc}") from exc
    if not verify_classification(H, verdict):
        raise InternalInconsistency("emitted certificate does not re-verify")
    return verdict


def cmd_classify(args) -> int:
    H = _load_h(args)
    write_json(classification_to_json(_classify_checked(H, args.h)), args.out)
    return EXIT_OK


def cmd_order(args) -> int:
    H = _load_h(args)
    verdict = _classify_checked(H, args.h)
    body = classification_to_json(verdict)
    if isinstance(verdict, PolynomialMinMax):
        write_json({"ordering": list(verdict.ordering)}, args.out)
        return EXIT_OK
    if isinstance(verdict, PolynomialCycle):
        body["reason"] = f"the directed {verdict.k}-cycle has no Min-Max ordering"
    write_json(body, args.out)
    return EXIT_NEGATIVE


def cmd_solve(args) -> int:
    H, D, costs = _load_instance(args)
    budget = args.budget if args.budget is not None else 2_000_000
    body: dict = {"solver": "bruteforce" if args.oracle else "polynomial"}
    try:
        res = solve(H, D, costs, oracle=args.oracle, node_budget=budget)
    except NotSemicompleteWpl as exc:
        raise FormatError(f"{args.h}: {exc}") from exc
    except NotPolynomial as exc:
        body.update(status="np_hard", verdict=classification_to_json(exc.classification))
        write_json(body, args.out)
        return EXIT_NEGATIVE
    except BudgetExceeded as exc:
        body.update(status="budget_exceeded", message=str(exc))
        write_json(body, args.out)
        return EXIT_NEGATIVE
    if res is None:
        body.update(status="infeasible", cost=None, map=None)
        write_json(body, args.out)
        return EXIT_NEGATIVE
    if verify_hom(D, H, res.map) is not None or hom_cost(costs, res.map) != res.cost:
        raise InternalInconsistency("solver returned an invalid homomorphism")
    body.update(status="optimal", cost=res.cost, map=list(res.map))
    write_json(body, args.out)
    return EXIT_OK


def _verify_certificate(args, cert: dict) -> tuple[bool, str]:
    H = _load_h(args)
    if "verdict" in cert:
        try:
            verdict = classification_from_json(cert)
        except (ValueError, TypeError, KeyError) as exc:
            raise FormatError(f"{args.cert}: {exc}") from exc
        ok = verify_classification(H, verdict)
        return ok, "certificate re-verifies" if ok else "certificate does not hold on H"
    if "ordering" in cert:
        order = cert["ordering"]
        if not isinstance(order, list) or sorted(order) != list(range(H.n)):
            return False, "field 'ordering' is not a permutation of V(H)"
        bad = check_minmax(H, order)
        if bad is not None:
            return False, f"arcs {list(bad.arc_e)} and {list(bad.arc_f)} lack their {bad.missing} {list(bad.pair)}"
        if not slices_are_intervals(H, order):
            return False, "Min-Max ordering but some out-slice is not an interval"
        return True, "valid Min-Max ordering with interval slices"
    if "map" in cert:
        D = _load(args.d, "--d", Digraph.from_json)
        f = cert["map"]
        if not isinstance(f, list) or len(f) != D.n or not all(type(c) is int and 0 <= c < H.n for c in f):
            return False, "field 'map' must assign a vertex of H to every vertex of D"
        bad = verify_hom(D, H, f)
        if bad is not None:
            return False, f"arc {list(bad)} of D is not preserved"
        if args.costs is not None and cert.get("cost") is not None:
            costs = _load(args.costs, "--costs", CostMatrix.from_json)
            total = hom_cost(costs, f)
            if total != cert["cost"]:
                return False, f"map costs {total}, certificate claims {cert['cost']}"
        return True, "valid homomorphism"
    raise FormatError(f"{args.cert}: expected a 'verdict', 'ordering' or 'map' field")


def cmd_verify(args) -> int:
    cert = read_json(args.cert)
    if not isinstance(cert, dict):
        raise FormatError(f"{args.cert}: certificate must be a JSON object")
    ok, detail = _verify_certificate(args, cert)
    write_json({"valid": ok, "detail": detail}, args.out)
    return EXIT_OK if ok else EXIT_NEGATIVE


def reduction_bundle(inst: ReductionInstance) -> dict:
    return {
        "lemma": inst.tag,
        "g": inst.G.to_json(),
        "h": inst.H.to_json(),
        "d": inst.D.to_json(),
        "costs": inst.costs.to_json()["costs"],
        "vertex_origin": [[role, list(x) if isinstance(x, tuple) else x] for role, x in inst.vertex_origin],
        "optimum": f"{'4p' if inst.tag == 'rprime' else 'p'} - alpha(G) with p = {inst.G.n}",
    }


def cmd_reduce(args) -> int:
    if args.lemma is None:
        raise UsageError("missing required flag --lemma")
    G = _load(args.g, "--g", UndirectedGraph.from_json)
    if args.lemma == "rprime":
        inst = reduce_mis_rprime(G, loop_at_1=args.loop_at_1)
    else:
        if args.loop_at_1:
            raise UsageError("--loop-at-1 applies only to --lemma rprime")
        inst = reduce_mis_gadget(G)
    bundle = reduction_bundle(inst)
    if args.out is None or args.out == "-":
        write_json(bundle, None)
        return EXIT_OK
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "h.json").write_text(dumps(inst.H.to_json()))
    (out / "d.json").write_text(dumps(inst.D.to_json()))
    (out / "costs.json").write_text(dumps(inst.costs.to_json()))
    (out / "instance.json").write_text(dumps(bundle))
    return EXIT_OK


def _probability(value: Optional[float], flag: str, default: float) -> float:
    if value is None:
        return default
    if not 0.0 <= value <= 1.0:
        raise UsageError(f"{flag} must lie in [0, 1], got {value}")
    return value


def cmd_gen(args) -> int:
    seed = args.seed if args.seed is not None else 0
    n = args.n if args.n is not None else 5
    if n < 1:
        raise UsageError(f"--n must be positive, got {n}")
    loop_prob = _probability(args.loop_prob, "--loop-prob", 0.5 if args.kind == "h" else 0.0)
    if args.kind == "h":
        sym = _probability(args.sym_prob, "--sym-prob", 0.3)
        write_json(random_semicomplete_wpl(seed, n, sym, loop_prob).to_json(), args.out)
    elif args.kind == "d":
        arc = _probability(args.arc_prob, "--arc-prob", 0.3)
        write_json(random_digraph(seed, n, arc, loop_prob).to_json(), args.out)
    else:
        H = _load_h(args)
        rng = random.Random(seed)
        rows = [[rng.randint(0, 9) for _ in range(H.n)] for _ in range(n)]
        write_json(CostMatrix(rows).to_json(), args.out)
    return EXIT_OK


def cmd_selftest(args) -> int:
    from minhom.acceptance import run_all

    scale = args.scale
    if not 0.0 < scale <= 1.0:
        raise UsageError(f"--scale must lie in (0, 1], got {scale}")
    results = run_all(scale)
    for r in results:
        print(r.line(), flush=True)
    return EXIT_OK if all(r.passed for r in results) else EXIT_INTERNAL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="minhom", description="Minimum cost homomorphisms to semicomplete digraphs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, helptext: str, func, *flags: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=helptext)
        p.set_defaults(func=func)
        for flag in flags:
            if flag in ("--seed", "--n", "--budget"):
                p.add_argument(flag, type=int)
            elif flag in ("--sym-prob", "--loop-prob", "--arc-prob"):
                p.add_argument(flag, type=float)
            else:
                p.add_argument(flag, metavar="FILE")
        p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
        return p

    add("classify", "dichotomy verdict with certificate", cmd_classify, "--h")
    add("order", "Min-Max ordering of H", cmd_order, "--h")
    p = add("solve", "minimum cost homomorphism", cmd_solve, "--h", "--d", "--costs", "--budget")
    p.add_argument("--oracle", action="store_true", help="use the exhaustive search")
    p = add("verify", "check a verdict, ordering or map file", cmd_verify, "--h", "--d", "--costs")
    p.add_argument("cert", metavar="CERT", help="certificate file ('-' for stdin)")
    p = add("reduce", "independent-set reduction instance", cmd_reduce, "--g")
    p.add_argument("--lemma", choices=("rprime", "gadget"))
    p.add_argument("--loop-at-1", action="store_true", help="give the rprime target a loop at its first vertex")
    p = add("gen", "seeded random H, D or costs", cmd_gen, "--seed", "--n", "--sym-prob", "--loop-prob",
            "--arc-prob", "--h")
    p.add_argument("kind", choices=("h", "d", "costs"))
    p = sub.add_parser("selftest", help="acceptance suites at reduced scale")
    p.set_defaults(func=cmd_selftest)
    p.add_argument("--scale", type=float, default=0.1)
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, FormatError) as exc:
        print(f"minhom {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InternalInconsistency as exc:
        print(f"minhom {args.command}: internal verification failed: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
