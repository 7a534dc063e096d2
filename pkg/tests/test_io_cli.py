import io
import json
import subprocess
import sys

import pytest

from orbitgames.catalog import basic_catalog, fixtures, named_catalog
from orbitgames.cli import main
from orbitgames.groupoids import action_groupoid, pair_groupoid
from orbitgames.io import InstanceDoc, ParseError, doc_to_dict, dumps, emit_doc, emit_dot, loads_doc
from orbitgames.models import graph
from orbitgames.orbit_games import becker_digraph, hjorth_graph


def run(argv, stdin=""):
    out = io.StringIO()
    code = main(argv, out=out, inp=io.StringIO(stdin))
    return code, out.getvalue()


@pytest.fixture(scope="module")
def docs(tmp_path_factory):
    d = tmp_path_factory.mktemp("fx")
    paths = {}
    for name, act in fixtures().items():
        p = d / f"{name}.json"
        p.write_text(emit_doc(InstanceDoc.from_action(act, name)))
        paths[name] = str(p)
    return paths


def test_round_trip_catalog(instances):
    for inst in list(instances) + basic_catalog():
        doc = InstanceDoc.from_action(inst.action, inst.name)
        back = loads_doc(emit_doc(doc))
        assert back == doc
        assert emit_doc(back) == emit_doc(doc)


def test_round_trip_groupoid_and_models():
    doc = InstanceDoc(name="mixed", groupoid=pair_groupoid(2), language=(("E", 2),),
                      structures={"edge": graph(2, [(0, 1)]), "tri": graph(3, [(0, 1), (1, 2), (0, 2)])})
    back = loads_doc(emit_doc(doc))
    assert back.groupoid == doc.groupoid
    assert doc_to_dict(back) == doc_to_dict(doc)


def test_flat_mult_accepted():
    d = doc_to_dict(InstanceDoc.from_action(fixtures()["z2-swap"]))
    d["group"]["mult"] = [0, 1, 1, 0]
    assert loads_doc(json.dumps(d)).action == fixtures()["z2-swap"]


@pytest.mark.parametrize("text", ["{", "[]", '{"space": {"n_points": 2}}', '{"space": {"n_points": "x", "basis": []}}',
                                  '{"groupoid": {"n_arrows": 1, "objects": [1]}}'])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        loads_doc(text)


def test_dot_examples(fx):
    loops = emit_dot(becker_digraph(fx["discrete2-trivial"]))
    assert loops == ('digraph becker {\n  "0" [label="[0] = {0}"];\n  "1" [label="[1] = {1}"];\n'
                     '  "0" -> "0" [class="becker"];\n  "1" -> "1" [class="becker"];\n}\n')
    s = emit_dot(becker_digraph(fx["sierpinski-trivial"]))
    assert '"0" -> "1"' in s and '"1" -> "0"' not in s
    h = emit_dot(hjorth_graph(fx["indiscrete-trivial"]))
    assert h.startswith("graph hjorth {") and '"0" -- "1"' in h
    for a in fx.values():
        g = becker_digraph(a)
        assert g.edges and emit_dot(g) == emit_dot(becker_digraph(a))


def test_cli_orbits(docs):
    code, out = run(["orbits", docs["z2-swap"]])
    assert code == 0 and json.loads(out) == {"orbits": [[0, 1]]}
    code, out = run(["orbits", docs["z2-swap"], "--groupoid"])
    assert json.loads(out) == {"orbits": [[0, 1]]}


def test_cli_becker(docs):
    code, out = run(["becker", docs["sierpinski-trivial"], "0", "1"])
    assert code == 0
    assert json.loads(out)["becker"] == [{"x": 0, "y": 1, "ii_wins": True, "witness": 0}]
    code, out = run(["becker", docs["sierpinski-trivial"], "--all", "--groupoid"])
    assert [r["ii_wins"] for r in json.loads(out)["becker"]] == [True, True, False, True]


def test_cli_hjorth_and_ranks(docs):
    code, out = run(["hjorth", docs["indiscrete-trivial"], "--all", "--full-choice"])
    assert all(r["ii_wins"] for r in json.loads(out)["hjorth"])
    code, out = run(["ranks", docs["sierpinski-trivial"], "0", "1"])
    r = json.loads(out)
    assert r["winner"] == "I" and isinstance(r["rank"], int)
    flags = [r["related_at"][str(k)] for k in range(r["positions"] + 1)]
    assert flags == [k <= r["rank"] for k in range(r["positions"] + 1)]


def test_cli_other_commands(docs):
    assert run(["validate", docs["z3-rotation"]])[0] == 0
    code, out = run(["local-orbit", docs["z3-rotation"], "0", "0,1", "0,1"])
    assert json.loads(out)["local_orbit"] == [0, 1]
    code, out = run(["turbulence", docs["indiscrete-trivial"]])
    assert json.loads(out)["preturbulent"] is True
    code, out = run(["graphs", docs["sierpinski-trivial"], "--kind", "becker", "--format", "dot"])
    assert '"0" -> "1"' in out
    code, out = run(["graphs", docs["sierpinski-trivial"], "--kind", "hjorth"])
    assert json.loads(out)["edges"] == [[0, 0], [1, 1]]
    code, out = run(["obstruction", docs["sierpinski-trivial"]])
    assert json.loads(out)["failing"] == [1]


def test_cli_models(tmp_path):
    doc = InstanceDoc(name="m", language=(("E", 2),),
                      structures={"edge": graph(2, [(0, 1)]), "tri": graph(3, [(0, 1), (1, 2), (0, 2)])})
    p = tmp_path / "m.json"
    d = doc_to_dict(doc)
    d["sequences"] = {"x": ["a", "b"], "y": ["b", "a", "c"]}
    p.write_text(json.dumps(d))
    code, out = run(["models", str(p)])
    r = json.loads(out)
    row = next(e for e in r["structures"] if e["a"] == "edge" and e["b"] == "tri")
    assert row["becker_game"] and row["embedding"] and not row["isomorphic"]
    row = next(e for e in r["sequences"] if e["x"] == "x" and e["y"] == "y")
    assert row["becker_game"] and row["ran_subset"] and not row["eq_plus"]


def test_exit_codes(docs, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["orbits", str(bad)])[0] == 2
    assert run(["orbits", str(tmp_path / "missing.json")])[0] == 4
    d = doc_to_dict(InstanceDoc.from_action(fixtures()["sierpinski-trivial"]))
    d["group"] = doc_to_dict(InstanceDoc.from_action(fixtures()["z2-swap"]))["group"]
    d["action"] = {"table": [[0, 1], [1, 0]]}
    sem = tmp_path / "sem.json"
    sem.write_text(json.dumps(d))
    assert run(["validate", str(sem)])[0] == 3
    assert run(["becker", str(sem), "0", "1"])[0] == 3
    assert run(["becker", docs["z2-swap"], "0", "7"])[0] == 3
    assert run(["becker", docs["z2-swap"]])[0] == 3
    assert run(["models", docs["z2-swap"]])[0] == 3
    with pytest.raises(SystemExit) as e:
        run(["frobnicate"])
    assert e.value.code == 2


def test_oracle_diff_sequences():
    code, out = run(["oracle-diff", "--family", "sequences"])
    assert code == 0 and json.loads(out)["sequences"]["mismatches"] == 0


def test_oracle_diff_mismatch_exit(monkeypatch):
    import orbitgames.cli as cli
    monkeypatch.setattr(cli, "run_family", lambda f, q: [{"x": ["a"], "y": [], "oracle": False}])
    code, out = run(["oracle-diff", "--family", "diag", "--quick"])
    assert code == 1 and json.loads(out)["diag"]["counterexamples"]


def test_gen(tmp_path):
    code, out = run(["gen", "--catalog", "fixtures", "--out", str(tmp_path)])
    assert code == 0 and json.loads(out)["written"] == 7
    files = sorted(tmp_path.glob("*.json"))
    assert loads_doc(files[4].read_text()).action == fixtures()["z2-swap"]
    code, out = run(["gen", "--catalog", "basic"])
    assert len(json.loads(out)) == len(named_catalog("basic"))
    assert run(["gen", "--catalog", "nope"])[0] == 3


def test_structured_output_deterministic(docs):
    for argv in (["becker", docs["z3-rotation"], "--all"], ["turbulence", docs["sierpinski-trivial"]],
                 ["obstruction", docs["indiscrete-trivial"]]):
        assert run(argv) == run(argv)
    assert dumps({"b": 1, "a": [1, 2]}) == '{\n  "a": [\n    1,\n    2\n  ],\n  "b": 1\n}\n'


def test_play_flags_illegal_moves(docs):
    code, out = run(["play", docs["sierpinski-trivial"], "1", "0", "--as", "I", "--game", "becker"], "x\n9\n1\n")
    assert code == 0
    assert "illegal move 'x'" in out and "illegal move '9'" in out
    assert out.rstrip().endswith("Result: Player I wins.")


def _play_all(path, x, y, human, game, max_moves=30):
    """Every line of human input, tried exhaustively by depth-first replay."""
    results = []
    stack = [""]
    while stack:
        prefix = stack.pop()
        code, out = run(["play", path, str(x), str(y), "--as", human, "--game", game,
                         "--max-moves", str(max_moves)], prefix)
        assert "illegal" not in out
        if "End of input." in out:
            k = out.rsplit("move> ", 1)[0].rsplit("\n  ", 1)[-1].split(")")[0]
            for c in range(1, int(k) + 1):
                stack.append(prefix + f"{c}\n")
        else:
            results.append(out.rstrip().splitlines()[-1])
    return results


@pytest.mark.parametrize("key,x,y,game", [("sierpinski-trivial", 0, 1, "hjorth"), ("sierpinski-trivial", 1, 0, "becker"),
                                           ("indiscrete-trivial", 0, 1, "hjorth"), ("z2-swap", 0, 1, "becker")])
def test_play_engine_realizes_verdict(docs, key, x, y, game):
    code, out = run(["ranks", docs[key], str(x), str(y), "--game", game])
    winner = json.loads(out)["winner"]
    loser = "II" if winner == "I" else "I"
    outcomes = _play_all(docs[key], x, y, loser, game, max_moves=12)
    assert outcomes
    for line in outcomes:
        assert line in (f"Result: Player {winner} wins.", "Result: Player II survives.")
        if winner == "I":
            assert line == "Result: Player I wins."


def test_module_entry_point(docs):
    r = subprocess.run([sys.executable, "-m", "orbitgames", "orbits", docs["z2-swap"]], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout) == {"orbits": [[0, 1]]}


def test_threads_env(docs, monkeypatch):
    base = run(["becker", docs["z3-rotation"], "--all"])
    monkeypatch.setenv("ORBITGAMES_THREADS", "2")
    assert run(["becker", docs["z3-rotation"], "--all"]) == base


def test_groupoid_section_used(tmp_path):
    doc = InstanceDoc(name="pair", groupoid=pair_groupoid(2))
    p = tmp_path / "g.json"
    p.write_text(emit_doc(doc))
    code, out = run(["becker", str(p), "0", "3", "--groupoid"])
    assert code == 0 and json.loads(out)["becker"][0]["ii_wins"]
    code, out = run(["validate", str(p)])
    assert code == 0 and json.loads(out)["valid"]
    assert action_groupoid(fixtures()["z2-swap"]).n_arrows == 4
