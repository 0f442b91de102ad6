"""Command line entry points: argument handling, output, exit statuses."""

import json

import pytest

from subexp.cli import main

E1_DOC = {
    "model": {
        "label": "E1",
        "members": [
            {"kind": "finite", "atoms": [[-1.0, 0.5], [1.0, 0.5]]},
            {"kind": "finite", "atoms": [[-1.0, 0.25], [1.0, 0.75]]},
        ],
    },
    "experiment": "axioms",
    "parameters": {"trials": 40},
}


def write_cfg(tmp_path, doc, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def test_run_prints_summary_and_exits_zero(tmp_path, capsys):
    cfg = write_cfg(tmp_path, E1_DOC)
    code = main(["run", cfg, "--out", str(tmp_path / "out")])
    assert code == 0
    out = capsys.readouterr().out
    assert "axioms" in out and "run_id=" in out and "PASS" in out


def test_run_missing_config_exits_two(tmp_path, capsys):
    code = main(["run", str(tmp_path / "nope.json")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_run_bad_json_exits_two(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    code = main(["run", str(path), "--out", str(tmp_path / "out")])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_run_schema_error_exits_two(tmp_path, capsys):
    doc = dict(E1_DOC, experiment="frobnicate")
    code = main(["run", write_cfg(tmp_path, doc), "--out", str(tmp_path / "out")])
    assert code == 2
    assert "frobnicate" in capsys.readouterr().err


def test_run_seed_override_flag(tmp_path):
    doc = dict(E1_DOC, experiment="three_series",
               parameters={"N": 2000, "N0": 200})
    cfg = write_cfg(tmp_path, doc)
    out = tmp_path / "out"
    code = main(["run", cfg, "--seed-override", "9", "--out", str(out)])
    assert code in (0, 1)
    resolved = json.loads((out / "resolved_config.json").read_text())
    assert resolved["seeds"] == [9]


def test_run_jobs_flag_preserves_bytes(tmp_path):
    doc = dict(E1_DOC, experiment="inequality_grid",
               parameters={"ns": [4, 8], "xs": [1.0, 2.0], "whichs": ["kolmogorov_upper"]})
    cfg = write_cfg(tmp_path, doc)
    assert main(["run", cfg, "--out", str(tmp_path / "a"), "--jobs", "1"]) == 0
    assert main(["run", cfg, "--out", str(tmp_path / "b"), "--jobs", "8"]) == 0
    assert (tmp_path / "a" / "results.csv").read_bytes() == (tmp_path / "b" / "results.csv").read_bytes()


def test_check_axioms_reports_each_property(capsys):
    code = main(["check-axioms", "--trials", "60", "--seed", "5"])
    assert code == 0
    lines = [l for l in capsys.readouterr().out.splitlines() if l]
    assert len(lines) == 8
    for line in lines:
        assert line.startswith("PASS ")
        assert "trials=60" in line and "worst_gap=" in line


def test_inequality_grid_runs_config(tmp_path, capsys):
    doc = dict(E1_DOC, experiment="inequality_grid",
               parameters={"ns": [4], "xs": [1.0, 2.0], "whichs": ["exponential"]})
    cfg = write_cfg(tmp_path, doc)
    code = main(["inequality-grid", cfg, "--out", str(tmp_path / "out")])
    assert code == 0
    assert (tmp_path / "out" / "results.csv").exists()


def test_inequality_grid_rejects_other_experiments(tmp_path, capsys):
    cfg = write_cfg(tmp_path, dict(E1_DOC, experiment="slln", parameters={}))
    code = main(["inequality-grid", cfg, "--out", str(tmp_path / "out")])
    assert code == 2
    err = capsys.readouterr().err
    assert "'slln'" in err and "inequality_grid" in err


def test_unknown_command_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
