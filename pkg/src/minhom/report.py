"""JSON serialisation of verdicts, solutions and instances."""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import Any

from minhom.classifier import (
    Classification,
    ITransitivityFailure,
    LooplessCycleNotCk,
    LWithCycleCoexistence,
    NPHard,
    PolynomialCycle,
    PolynomialMinMax,
    verdict_name,
)
from minhom.recognition import PatternHit, PatternKind, PigKind, PigWitness


class FormatError(ValueError):
    """Malformed input file; the message names the file and field."""


def read_json(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc.strerror})") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True) + "\n"


def write_json(obj: Any, path: str | None) -> None:
    text = dumps(obj)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def witness_to_json(w) -> dict:
    if isinstance(w, PatternHit):
        return {
            "type": "pattern",
            "kind": w.kind.value,
            "vertices": list(w.vertices),
            "loop_mask": list(w.loop_mask),
        }
    if isinstance(w, PigWitness):
        return {"type": "pig", "kind": w.kind.value, "vertices": list(w.vertices)}
    if isinstance(w, LooplessCycleNotCk):
        return {"type": "loopless_cycle_not_ck", "cycle": list(w.cycle), "extra": w.extra}
    if isinstance(w, ITransitivityFailure):
        return {"type": "i_transitivity_failure", "triple": list(w.triple), "extra": w.extra}
    if isinstance(w, LWithCycleCoexistence):
        return {"type": "l_with_cycle", "cycle": list(w.cycle), "loop_vertex": w.loop_vertex}
    raise TypeError(f"unknown witness {w!r}")


def witness_from_json(obj: dict):
    kind = obj.get("type")
    if kind == "pattern":
        return PatternHit(
            PatternKind(obj["kind"]),
            tuple(obj["vertices"]),
            tuple(bool(x) for x in obj.get("loop_mask", [])),
        )
    if kind == "pig":
        return PigWitness(PigKind(obj["kind"]), tuple(obj["vertices"]))
    if kind == "loopless_cycle_not_ck":
        return LooplessCycleNotCk(tuple(obj["cycle"]), obj["extra"])
    if kind == "i_transitivity_failure":
        return ITransitivityFailure(tuple(obj["triple"]), obj["extra"])
    if kind == "l_with_cycle":
        return LWithCycleCoexistence(tuple(obj["cycle"]), obj["loop_vertex"])
    raise ValueError(f"unknown witness type {kind!r}")


def describe(c: Classification) -> str:
    if isinstance(c, PolynomialCycle):
        return f"H is the directed {c.k}-cycle; solved by label propagation"
    if isinstance(c, PolynomialMinMax):
        return "H has a Min-Max ordering; solved by minimum cut"
    return c.reason


def classification_to_json(c: Classification) -> dict:
    body: dict = {"verdict": verdict_name(c), "reason": describe(c)}
    if isinstance(c, PolynomialCycle):
        body.update(k=c.k, cycle=list(c.cycle))
    elif isinstance(c, PolynomialMinMax):
        body["ordering"] = list(c.ordering)
    else:
        body["witness"] = witness_to_json(c.witness)
    return body


def classification_from_json(obj: dict) -> Classification:
    verdict = obj.get("verdict")
    try:
        if verdict == "polynomial_cycle":
            return PolynomialCycle(int(obj["k"]), tuple(obj["cycle"]))
        if verdict == "polynomial_minmax":
            return PolynomialMinMax(tuple(obj["ordering"]))
        if verdict == "np_hard":
            return NPHard(witness_from_json(obj["witness"]), obj.get("reason", ""))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"verdict report is missing field {exc}") from exc
    raise ValueError(f"unknown verdict {verdict!r}")
