import json

import pytest

from minhom.cli import run
from minhom.core import digraph_w, directed_cycle, transitive_tournament


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "tt2": write(tmp_path / "tt2.json", transitive_tournament(2).to_json()),
        "arc": write(tmp_path / "arc.json", {"n": 2, "arcs": [[0, 1]]}),
        "costs": write(tmp_path / "costs.json", {"costs": [[5, 1], [1, 3]]}),
        "c3": write(tmp_path / "c3.json", directed_cycle(3).to_json()),
        "w": write(tmp_path / "w.json", digraph_w().to_json()),
        "dir": tmp_path,
    }


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_cycle(capsys, files):
    code, out, _ = call(capsys, "classify", "--h", files["c3"])
    body = json.loads(out)
    assert code == 0 and body["verdict"] == "polynomial_cycle" and body["k"] == 3


def test_classify_hard_and_verify_round_trip(capsys, files):
    cert = str(files["dir"] / "v.json")
    code, _, _ = call(capsys, "classify", "--h", files["w"], "--out", cert)
    body = json.loads(open(cert).read())
    assert code == 0 and body["verdict"] == "np_hard" and body["witness"]["vertices"] == [0, 1]
    code, out, _ = call(capsys, "verify", "--h", files["w"], cert)
    assert code == 0 and json.loads(out)["valid"]
    code, out, _ = call(capsys, "verify", "--h", files["c3"], cert)
    assert code == 1 and not json.loads(out)["valid"]


def test_solve_example(capsys, files):
    code, out, _ = call(capsys, "solve", "--h", files["tt2"], "--d", files["arc"], "--costs", files["costs"])
    body = json.loads(out)
    assert code == 0 and body["cost"] == 8 and body["map"] == [0, 1]


def test_solve_hard_and_oracle(capsys, files):
    args = ["solve", "--h", files["w"], "--d", files["arc"], "--costs", files["costs"]]
    code, out, _ = call(capsys, *args)
    assert code == 1 and json.loads(out)["status"] == "np_hard"
    code, out, _ = call(capsys, *args, "--oracle", "--budget", "1000")
    assert code == 0 and json.loads(out)["cost"] == 2
    code, out, _ = call(capsys, *args, "--oracle", "--budget", "0")
    assert code == 1 and json.loads(out)["status"] == "budget_exceeded"


def test_solve_infeasible(capsys, files):
    d = write(files["dir"] / "loop.json", {"n": 1, "arcs": [[0, 0]]})
    c = write(files["dir"] / "c1.json", {"costs": [[0, 0]]})
    code, out, _ = call(capsys, "solve", "--h", files["tt2"], "--d", d, "--costs", c)
    assert code == 1 and json.loads(out)["status"] == "infeasible"


def test_solution_map_verifies(capsys, files):
    sol = str(files["dir"] / "sol.json")
    call(capsys, "solve", "--h", files["tt2"], "--d", files["arc"], "--costs", files["costs"], "--out", sol)
    code, out, _ = call(capsys, "verify", "--h", files["tt2"], "--d", files["arc"], "--costs", files["costs"], sol)
    assert code == 0 and json.loads(out)["valid"]
    bad = write(files["dir"] / "bad.json", {"map": [1, 0]})
    code, _, _ = call(capsys, "verify", "--h", files["tt2"], "--d", files["arc"], bad)
    assert code == 1


def test_order_and_verify(capsys, files):
    out_path = str(files["dir"] / "order.json")
    assert call(capsys, "order", "--h", files["tt2"], "--out", out_path)[0] == 0
    code, out, _ = call(capsys, "verify", "--h", files["tt2"], out_path)
    assert code == 0 and json.loads(out)["valid"]
    assert call(capsys, "order", "--h", files["c3"])[0] == 1
    assert call(capsys, "order", "--h", files["w"])[0] == 1


def test_usage_and_format_errors(capsys, files):
    assert call(capsys, "bogus")[0] == 2
    assert call(capsys, "classify")[0] == 2
    code, _, err = call(capsys, "classify", "--h", str(files["dir"] / "missing.json"))
    assert code == 2 and "missing.json" in err
    bad = write(files["dir"] / "bad_h.json", {"n": 2, "arcs": [[0, 1], [1]]})
    code, _, err = call(capsys, "classify", "--h", bad)
    assert code == 2 and "arcs[1]" in err
    short = write(files["dir"] / "short.json", {"costs": [[1, 2]]})
    code, _, err = call(capsys, "solve", "--h", files["tt2"], "--d", files["arc"], "--costs", short)
    assert code == 2 and "costs" in err
    code, _, err = call(capsys, "classify", "--h", write(files["dir"] / "e.json", {"n": 2, "arcs": []}))
    assert code == 2 and "semicomplete" in err


def test_reduce_bundle_and_directory(capsys, files):
    g = write(files["dir"] / "g.json", {"n": 2, "edges": [[0, 1]]})
    code, out, _ = call(capsys, "reduce", "--lemma", "rprime", "--g", g)
    bundle = json.loads(out)
    assert code == 0 and bundle["d"]["n"] == 4 and bundle["lemma"] == "rprime"
    outdir = files["dir"] / "red"
    assert call(capsys, "reduce", "--lemma", "gadget", "--g", g, "--out", str(outdir))[0] == 0
    assert json.loads((outdir / "d.json").read_text())["n"] == 10
    code, out, _ = call(
        capsys, "solve", "--h", str(outdir / "h.json"), "--d", str(outdir / "d.json"),
        "--costs", str(outdir / "costs.json"), "--oracle",
    )
    assert code == 0 and json.loads(out)["cost"] == 1


def test_gen_is_deterministic(capsys, files):
    a = call(capsys, "gen", "h", "--seed", "4", "--n", "7", "--sym-prob", "0.2", "--loop-prob", "0.6")[1]
    b = call(capsys, "gen", "h", "--seed", "4", "--n", "7", "--sym-prob", "0.2", "--loop-prob", "0.6")[1]
    assert a == b and json.loads(a)["n"] == 7
    d = call(capsys, "gen", "d", "--seed", "1", "--n", "5")[1]
    assert json.loads(d)["n"] == 5
    c = call(capsys, "gen", "costs", "--h", files["tt2"], "--n", "3", "--seed", "2")[1]
    assert len(json.loads(c)["costs"]) == 3
    assert call(capsys, "gen", "h", "--sym-prob", "2")[0] == 2


def test_classify_output_byte_identical(capsys, files):
    h = str(files["dir"] / "gen.json")
    call(capsys, "gen", "h", "--seed", "9", "--n", "6", "--out", h)
    first = call(capsys, "classify", "--h", h)[1]
    assert first == call(capsys, "classify", "--h", h)[1]


def test_selftest_small_scale(capsys):
    code, out, _ = call(capsys, "selftest", "--scale", "0.02")
    assert code == 0
    assert out.count("[PASS]") == 7
