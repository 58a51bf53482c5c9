import csv
import io
import json
import os

import pytest

from cohframe.cli import main


def run(tmp_path, *argv):
    out = tmp_path / "report"
    code = main(["verify", *argv, "--output", str(out)])
    return code, (out.read_text() if out.exists() else None)


def test_closure_lambda_passes(tmp_path):
    code, text = run(tmp_path, "closure", "--lambda", "2", "--tol", "1e-6")
    assert code == 0
    report = json.loads(text)
    assert set(report) == {"config", "results", "timing"}
    assert report["config"]["lambda"] == [2.0]
    assert report["timing"] is None
    names = [r["name"] for r in report["results"]]
    assert any("dev_max" in n for n in names)
    for r in report["results"]:
        assert set(r) >= {"name", "value", "expected", "tolerance", "pass"}


def test_failing_check_exit_one(tmp_path):
    code, text = run(tmp_path, "closure", "--radius", "3", "--n-radial", "10", "--n-angular", "40")
    assert code == 1
    assert any(not r["pass"] for r in json.loads(text)["results"])


@pytest.mark.parametrize("bad", [["--tol", "1e-1"], ["--tol", "1e-13"], ["--lambda", "-1"],
                                 ["--eps", "0.9"], ["--eps", "sqrt2+"], ["--zeta", "nonsense"]])
def test_bad_values_exit_two(tmp_path, bad):
    code, text = run(tmp_path, "closure", *bad)
    assert code == 2 and text is None


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"tol": 1e-6, "grid_size": 4}))
    code, text = run(tmp_path, "closure", "--config", str(cfg))
    assert code == 2 and text is None


def test_malformed_config_file(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text("{not json")
    assert run(tmp_path, "spin", "--config", str(cfg))[0] == 2


def test_flags_override_config(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"two_j": [1, 2], "tol": 1e-4}))
    code, text = run(tmp_path, "spin", "--config", str(cfg), "--two-j", "3")
    assert code == 0
    c = json.loads(text)["config"]
    assert c["two_j"] == [3] and c["tol"] == 1e-4


def test_unwritable_output(tmp_path):
    code = main(["verify", "spin", "--output", str(tmp_path / "missing" / "r.json")])
    assert code == 2


def test_missing_export_dir(tmp_path):
    assert main(["verify", "spin", "--export", str(tmp_path / "nope")]) == 2


def test_deterministic_with_seed(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert main(["verify", "propagator", "--seed", "7", "--output", str(a)]) == 0
    assert main(["verify", "propagator", "--seed", "7", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert any("monte carlo" in r["name"].lower() for r in json.loads(a.read_text())["results"])


def test_plane_csv_and_frame_file(tmp_path):
    code, text = run(tmp_path, "plane", "--n", "33", "--eps", "sqrt2/35")
    assert code == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["name", "value", "expected", "tolerance", "pass"]
    assert any("B_N" in r[0] or "unlike" in r[0] for r in rows[1:])
    frame = list(csv.reader(open(tmp_path / "plane_frame.csv")))
    assert frame[0] == ["n", "theta", "x", "y"] and len(frame) == 34
    assert os.path.exists(tmp_path / "plane_sweep.csv")


def test_export_tables(tmp_path):
    assert main(["verify", "transforms", "--export", str(tmp_path), "--output", str(tmp_path / "r.json")]) == 0
    assert (tmp_path / "weyl_grid.csv").read_text().startswith("q,p,re,im")


def test_timing_opt_in(tmp_path):
    code = main(["verify", "weak", "--timing", "--output", str(tmp_path / "r.json")])
    assert code == 0
    assert "weak" in json.loads((tmp_path / "r.json").read_text())["timing"]


def test_stdout_default(capsys):
    assert main(["verify", "spin", "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("name,value,expected,tolerance,pass")
