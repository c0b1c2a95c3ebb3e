import json

import pytest

from sectorcover import cli
from sectorcover.verify import union_area

from conftest import L_SHAPE, MAPS


def run(*argv):
    return cli.main([str(a) for a in argv])


def test_decompose_lshape(tmp_path):
    assert run("decompose", "--map", MAPS / "lshape.json", "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "decomposition.json").read_text())
    assert len(doc["sectors"]) == 2
    assert doc["status"] == "ok"
    assert doc["merged"] is not None
    assert (tmp_path / "decomposition.svg").read_text().startswith("<svg")


def test_decompose_rectangle(tmp_path):
    assert run("decompose", "--map", MAPS / "rectangle.json", "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "decomposition.json").read_text())
    assert len(doc["sectors"]) == 1


def test_units_cm(tmp_path, capsys):
    m = tmp_path / "cm.json"
    m.write_text(json.dumps({"units": "cm", "outer": L_SHAPE}))
    assert run("decompose", "--map", m, "--out", tmp_path) == 1
    assert "unsupported units" in capsys.readouterr().err


def test_missing_map(tmp_path):
    assert run("plan", "--map", tmp_path / "nope.json", "--out", tmp_path) == 1


def test_plan_rectangle(tmp_path):
    assert run("plan", "--map", MAPS / "rectangle.json", "--out", tmp_path) == 0
    plan = json.loads((tmp_path / "plan.json").read_text())
    assert plan["totals"]["coverage_lines"] == 3
    assert plan["totals"]["transition_time_s"] == 0.0
    coverage = [s for s in plan["steps"] if s["kind"] == "coverage"]
    assert len(coverage) == 1
    assert len(coverage[0]["segment_times"]) == len(coverage[0]["waypoints"]) - 1
    svg = (tmp_path / "plan.svg").read_text()
    assert "<circle" in svg


def test_plan_lshape_report(tmp_path):
    assert run("plan", "--map", MAPS / "lshape.json", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["percent_area"] >= 0.95
    plan = json.loads((tmp_path / "plan.json").read_text())
    t = plan["totals"]
    assert t["total_time_s"] == pytest.approx(t["lawnmower_time_s"] + t["transition_time_s"], abs=1e-9)
    assert report["cost_s"] == pytest.approx(t["total_time_s"])


def test_plan_two_rooms_unreachable(tmp_path):
    assert run("plan", "--map", MAPS / "two_rooms.json", "--out", tmp_path) == 3


def test_target_unreached_exit(tmp_path):
    assert run("decompose", "--map", MAPS / "comb.json", "--gamma", 1.0, "--out", tmp_path) == 2


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("gamma = 0.9\nfoo = 1\n")
    assert run("plan", "--map", MAPS / "lshape.json", "--config", cfg, "--out", tmp_path) == 1
    assert "line 2" in capsys.readouterr().err


def test_invalid_gamma(tmp_path):
    assert run("decompose", "--map", MAPS / "lshape.json", "--gamma", 1.5, "--out", tmp_path) == 1


def test_compare(capsys):
    assert run("compare", "--map", MAPS / "lshape.json") == 0
    out = capsys.readouterr().out
    rows = {line.split()[0] if not line.startswith("G-Sect merged") else "merged": line.split() for line in out.splitlines()}
    assert rows["BCD"][1] == "2"
    assert rows["G-Sect"][1] == "2"


def test_verify_passes(capsys):
    assert run("verify", "--seed", 42, "--trials", 20) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and out.count("PASS") >= 8


def test_verify_zero_trials(capsys):
    assert run("verify", "--trials", 0) == 1
    assert "usage error" in capsys.readouterr().err


def test_verify_catches_supermodular_mutant(capsys):
    def squared(shapes, env):
        return union_area(shapes, env) ** 2

    args = cli.build_parser().parse_args(["verify", "--seed", "42", "--trials", "30"])
    assert cli.cmd_verify(args, squared) == 1
    out = capsys.readouterr().out
    assert "FAIL coverage: submodular" in out
    assert "counterexample" in out


def test_plan_deterministic(tmp_path):
    for k in (1, 2):
        assert run("plan", "--map", MAPS / "lshape_notch.json", "--seed", 3, "--out", tmp_path / str(k)) == 0
    for name in ("plan.json", "report.json", "decomposition.json"):
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "2" / name).read_bytes()
