from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from fjmult.cli import main, run

GL1 = {
    "T": {"family": "GL", "n": 1, "q": 5, "split": [[1, 1]]},
    "chi": {"values": [["Split", 1, 0, 1]]},
    "S": {"family": "GL", "n": 1, "q": 5, "split": [[1, 1]]},
    "eta": {"values": [["Split", 1, 0, 3]]},
}


@pytest.fixture
def runner():
    return CliRunner()


def _write(tmp_path, doc, name="in.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_mult_gl1(runner, tmp_path):
    res = runner.invoke(main, ["mult", "--input", _write(tmp_path, GL1)])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert doc["result"]["total"] == 2
    assert doc["input"]["chi"] == GL1["chi"]


def test_tori_sp4(runner):
    res = runner.invoke(main, ["tori", "--family", "Sp", "--n", "2", "--q", "3"])
    assert res.exit_code == 0
    assert json.loads(res.output)["result"]["count"] == 5


def test_distinguish(runner):
    res = runner.invoke(main, ["distinguish", "--m", "4", "--s", "1", "--q", "3", "--ramified"])
    assert res.exit_code == 0
    assert json.loads(res.output)["result"]["c_s"] in (1, -1)
    res = runner.invoke(main, ["descent", "distinguish", "--m", "3", "--s", "1", "--q", "3", "--unramified"])
    assert json.loads(res.output)["result"] == {"c_s": 1}


def test_distinguish_error_is_structured(runner):
    res = runner.invoke(main, ["distinguish", "--m", "4", "--s", "1", "--q", "3", "--unramified"])
    assert res.exit_code == 2
    doc = json.loads(res.output)
    assert doc["error"]["error"] == "no-distinguished-representation"
    assert "result" not in doc


def test_schema_error_pointer(runner, tmp_path):
    bad = json.loads(json.dumps(GL1))
    bad["T"]["split"][0][1] = "x"
    res = runner.invoke(main, ["mult", "--input", _write(tmp_path, bad)])
    assert res.exit_code == 2
    err = json.loads(res.output)["error"]
    assert err["error"] == "schema" and err["pointer"] == "/T/split/0/1"


def test_invalid_field(runner):
    res = runner.invoke(main, ["tori", "--family", "Sp", "--n", "2", "--q", "4"])
    assert res.exit_code == 2
    assert json.loads(res.output)["error"]["error"] == "invalid-field"


def test_size_error_propagates(tmp_path, runner):
    T = {"family": "Sp", "n": 12, "q": 3, "split": [[1, 12]]}
    chi = {"values": [["Split", 1, k, 0] for k in range(12)]}
    doc = {"T": T, "chi": chi, "S": T, "eta": chi}
    res = runner.invoke(main, ["mult", "--input", _write(tmp_path, doc)])
    assert res.exit_code == 2
    assert json.loads(res.output)["error"]["error"] == "size-limit"


def test_run_dispatch():
    doc = run({"verb": "mult", **GL1})
    assert doc["verb"] == "mult" and doc["result"]["total"] == 2
    assert run({"verb": "tori", "family": "U", "n": 2, "q": 3})["result"]["count"] == 2


def test_run_rejects_unknown_verb(runner, tmp_path):
    res = runner.invoke(main, ["run", "--input", _write(tmp_path, {"verb": "plot"})])
    assert res.exit_code == 2
    assert json.loads(res.output)["error"]["pointer"] == "/verb"


def test_intertwine_verb(runner, tmp_path):
    T = {"family": "U", "n": 2, "q": 3, "norm_one": [[1, 2]]}
    doc = {"T": T, "chi": {"values": [["NormOne", 1, 0, 0], ["NormOne", 1, 1, 1]]}, "S": T,
           "eta": {"values": [["NormOne", 1, 0, 2], ["NormOne", 1, 1, 3]]}}
    res = runner.invoke(main, ["intertwine", "--input", _write(tmp_path, doc)])
    out = json.loads(res.output)
    assert res.exit_code == 0
    assert out["result"]["intertwine"] == (out["result"]["total"] == 0)


def test_audit_byte_stable_across_jobs(runner, tmp_path):
    args = ["audit", "--family", "U", "--n", "3", "--q", "3", "--seed", "7"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    runner.invoke(main, args + ["--jobs", "1", "-o", str(a)])
    runner.invoke(main, args + ["--jobs", "3", "-o", str(b)])
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["ok"] and doc["result"]["hs_bound"] == 288


def test_audit_exit_code_reflects_bound(runner):
    res = runner.invoke(main, ["audit", "--family", "Sp", "--n", "1", "--q", "3", "--characters", "8"])
    doc = json.loads(res.output)
    assert doc["checks"]["bound"] is False and res.exit_code == 1


def test_oracle_verify(runner):
    res = runner.invoke(main, ["oracle", "verify", "--family", "GL", "--n", "1"])
    assert res.exit_code == 0
    doc = json.loads(res.output)
    assert sorted(doc["checks"]) == ["GL1(F_3)", "GL1(F_5)", "GL1(F_7)"]


def test_descent_verify_u(runner):
    res = runner.invoke(main, ["descent", "verify-u", "--n", "2", "--q", "3", "--samples", "4"])
    assert res.exit_code == 0
    assert json.loads(res.output)["result"]["ok"]


def test_timing_flag(runner):
    res = runner.invoke(main, ["tori", "--family", "GL", "--n", "2", "--q", "3", "--timing"])
    assert "wall_clock_s" in json.loads(res.output)
    res = runner.invoke(main, ["tori", "--family", "GL", "--n", "2", "--q", "3"])
    assert "wall_clock_s" not in json.loads(res.output)


def test_report_figures(runner, tmp_path):
    pytest.importorskip("matplotlib")
    res = runner.invoke(main, ["report", "--out-dir", str(tmp_path / "rep"), "--figures"])
    assert res.exit_code == 0
    assert (tmp_path / "rep" / "pairing_heatmap.png").exists()
    assert (tmp_path / "rep" / "bound_audit.png").exists()
