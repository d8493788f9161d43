import json
from pathlib import Path

import pytest

from fieldgeom.cli import main, run_scenario

SCEN = Path(__file__).resolve().parent.parent / "scenarios"


def _run(tmp_path, doc, *extra):
    spec = tmp_path / "in.json"
    spec.write_text(json.dumps(doc))
    out = tmp_path / "out.json"
    code = main([doc.get("task", "rank"), "--spec", str(spec), "--out", str(out), *extra])
    return code, (json.loads(out.read_text()) if out.exists() else None)


def test_rank_scenario():
    rep = run_scenario(json.loads((SCEN / "rank.json").read_text()))
    assert rep["results"]["rank"] == 2
    assert rep["results"]["basis"] == ["t1 + t2", "t1*t2"]
    assert rep["inputs"]["elems"] == ["t1+t2", "t1*t2", "t1"]


def test_reconstruct_scenario():
    rep = run_scenario(json.loads((SCEN / "reconstruct.json").read_text()))
    assert rep["results"]["recovered"] == ["t2", "t2^2 + 1"]
    assert all(rep["results"]["matches_substitution"])


def test_plane_scenario():
    rep = run_scenario(json.loads((SCEN / "plane.json").read_text()))
    assert rep["results"]["groups"][0]["collinear"] is True


@pytest.mark.parametrize("name", sorted(p.stem for p in SCEN.glob("*.json")))
def test_every_shipped_scenario_runs(tmp_path, name):
    doc = json.loads((SCEN / f"{name}.json").read_text())
    code, rep = _run(tmp_path, doc)
    assert code == 0 and rep["task"] == doc["task"]


def test_reports_are_deterministic(tmp_path):
    doc = json.loads((SCEN / "config.json").read_text())
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    spec = SCEN / "config.json"
    assert main(["config", "--spec", str(spec), "--out", str(a)]) == 0
    assert main(["config", "--spec", str(spec), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert "seconds" not in json.loads(a.read_text())
    assert doc["seed"] == json.loads(a.read_text())["seed"]


def test_timings_are_opt_in(tmp_path):
    code, rep = _run(tmp_path, {"task": "rank", "extension": {"nvars": 2}, "elems": ["t1"]}, "--timings")
    assert code == 0 and "seconds" in rep


def test_parse_error_exit_code(tmp_path, capsys):
    code, _ = _run(tmp_path, {"task": "rank", "extension": {"nvars": 2}, "elems": ["t1+"]})
    assert code == 2
    assert "parse error" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["rank", "--spec", str(bad)]) == 2
    assert main(["rank"]) == 2


def test_precondition_exit_code(tmp_path):
    doc = {"task": "reconstruct", "extension": {"nvars": 3}, "automorphism": "identity", "samples": ["t1"]}
    code, _ = _run(tmp_path, doc)
    assert code == 3


def test_task_mismatch_is_a_parse_error(tmp_path):
    spec = tmp_path / "s.json"
    spec.write_text(json.dumps({"task": "rank", "extension": {"nvars": 2}, "elems": ["t1"]}))
    assert main(["closure", "--spec", str(spec)]) == 2


def test_selftest_smoke(capsys):
    assert main(["selftest", "--seed", "1", "--scale", "smoke"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "pregeometry" in out


def test_selftest_injected_fault(capsys):
    assert main(["selftest", "--scale", "smoke", "--inject-fault", "oracle"]) == 1
    out = capsys.readouterr().out
    assert "FAIL oracle" in out and "jacobian_vs_oracle" in out


def test_selftest_unknown_family():
    assert main(["selftest", "--inject-fault", "nope"]) == 2
