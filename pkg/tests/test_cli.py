import json

import pytest

from derpic import cli
from derpic.homotopy import cone, identity, random_complex, stalk
from derpic.serialize import complex_to_json
from derpic.tilting import Report
from derpic.witnesses import build_X

from conftest import world


def run(argv, capsys):
    code = cli.main(argv)
    return code, capsys.readouterr()


def test_emit_empty():
    assert json.loads(cli.emit_report([])) == []


def test_emit_single_pass():
    rep = Report("x", {"a": 1}).done()
    doc = json.loads(cli.emit_report([rep]))
    assert len(doc) == 1 and doc[0]["status"] == "pass"
    assert list(doc[0]) == ["check", "params", "status", "details", "elapsed_ms"]


def test_frobenius_pass(capsys):
    code, out = run(["frobenius", "--n", "3", "--m", "2", "--t", "1", "--field", "Q", "--json", "-"], capsys)
    assert code == 0
    doc = json.loads(out.out[out.out.index("["):])
    assert doc[0]["details"]["nu_order"] == 3


def test_tilting_h_pass_with_witness(tmp_path, capsys):
    path = tmp_path / "out.json"
    code, _ = run(["tilting-h", "--n", "3", "--m", "2", "--t", "1", "--l", "0", "--json", str(path)], capsys)
    assert code == 0
    doc = json.loads(path.read_text())
    sub = doc[0]["details"]["0"]["details"]["certification"]["details"]
    assert sub["generation"]["status"] == "certified"
    assert sub["generation"]["witness"]


def test_grid_and_jobs(tmp_path, capsys):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([[2, 2, 1, "Q"], [2, 1, 3, "F2"]]))
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["theorem6", "--grid", str(grid), "--json", str(out1), "--no-timing"], capsys)[0] == 0
    assert run(["theorem6", "--grid", str(grid), "--json", str(out2), "--no-timing", "--jobs", "2"], capsys)[0] == 0
    assert out1.read_text() == out2.read_text()
    doc = json.loads(out1.read_text())
    assert [d["params"]["n"] for d in doc] == [2, 2]


def test_failure_exit(tmp_path, capsys):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([[2, 2, 2, "Q"]]))
    assert run(["frobenius", "--grid", str(grid)], capsys)[0] == 1


def test_inconclusive_exit(capsys):
    assert run(["tilting-h", "--n", "3", "--m", "2", "--t", "1", "--l", "0", "--budget", "0"], capsys)[0] == 2


@pytest.mark.parametrize("argv", [[], ["frobenius"], ["frobenius", "--n", "x"], ["nosuch"],
                                  ["frobenius", "--grid", "/nonexistent.json"]])
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == 64


def test_bad_grid(tmp_path, capsys):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps({"n": 2}))
    assert run(["orbit", "--grid", str(grid)], capsys)[0] == 64


def test_seed_is_recorded(capsys):
    code, out = run(["root", "--n", "2", "--m", "1", "--t", "3", "--seed", "5", "--json", "-"], capsys)
    assert code == 0
    doc = json.loads(out.out[out.out.index("["):])
    assert doc[0]["params"]["seed"] == 5


def test_complex_tool(tmp_path, capsys):
    w = world(3, 2, 1)
    X = build_X(w, 0)
    C = cone(identity(stalk(w.A, 1)))[0]
    px, pc = tmp_path / "x.json", tmp_path / "c.json"
    px.write_text(json.dumps(complex_to_json(X)))
    pc.write_text(json.dumps(complex_to_json(C)))
    code, out = run(["complex", "validate", str(px), "--json", "-"], capsys)
    assert code == 0 and '"rank": 3' in out.out
    code, out = run(["complex", "minimize", str(pc), "--json", "-"], capsys)
    assert code == 0 and '"rank": 0' in out.out
    code, out = run(["complex", "hom", str(px), str(px), "--json", "-"], capsys)
    assert code == 0 and '"dim": 1' in out.out
    assert run(["complex", "hom", str(px)], capsys)[0] == 64


def test_complex_tool_random(tmp_path, capsys):
    import random
    w = world(2, 2, 3, "F3")
    X = random_complex(w.A, random.Random(2))
    p = tmp_path / "r.json"
    p.write_text(json.dumps(complex_to_json(X)))
    assert run(["complex", "validate", str(p)], capsys)[0] == 0
