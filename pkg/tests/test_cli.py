import json
import subprocess
import sys

import pytest

from ncg_lab.cli import config_hash, emit_plot, load_config, main, ConfigError


def write(tmp_path, cfg, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg, indent=2))
    return path


BASE = {"family": {"name": "clock-shift", "n_grid": [8, 16]}, "seed": 3}


def test_verify_exit_zero(tmp_path):
    path = write(tmp_path, {**BASE, "experiments": [{"kind": "verify", "n": 5, "samples": 5}]})
    assert main([str(path), "--out-dir", str(tmp_path / "out")]) == 0
    rep = json.loads((tmp_path / "out" / "verify.json").read_text())
    assert rep["passed"]
    assert all(v <= rep["tol"] for v in rep["checks"].values())
    manifest = json.loads((tmp_path / "out" / "manifest.json").read_text())
    assert manifest["passed"] and "numpy" in manifest["versions"]


def test_bad_shape_entry_exit_two(tmp_path, capsys):
    cfg = {"family": {"name": "custom", "shape": ["0", 5]}, "seed": 1, "experiments": [{"kind": "verify"}]}
    path = write(tmp_path, cfg)
    assert main([str(path), "--out-dir", str(tmp_path / "o")]) == 2
    err = capsys.readouterr().err
    assert "cfg.json:" in err and "shape" in err


def test_invalid_json_reports_line(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "seed": 1,\n  "family": \n}\n')
    assert main([str(path)]) == 2
    assert "broken.json:4" in capsys.readouterr().err


def test_non_increasing_grid_rejected(tmp_path):
    path = write(tmp_path, {"family": {"name": "clock-shift", "n_grid": [8, 8]}, "seed": 1,
                            "experiments": [{"kind": "converge"}]})
    with pytest.raises(ConfigError):
        load_config(path)


def test_converge_csv_contract(tmp_path):
    path = write(tmp_path, {**BASE, "experiments": [{"kind": "converge", "F": 1}]})
    assert main([str(path), "--out-dir", str(tmp_path / "o"), "--plot"]) == 0
    lines = (tmp_path / "o" / "converge.csv").read_text().splitlines()
    assert lines[0] == "n,j,gap"
    assert len(lines) == 1 + 2 * 4
    assert (tmp_path / "o" / "converge.svg").read_text().startswith("<svg")


def test_json_format(tmp_path):
    path = write(tmp_path, {**BASE, "experiments": [{"kind": "mk", "n": 4, "budget": 10}]})
    assert main([str(path), "--out-dir", str(tmp_path / "o"), "--format", "json"]) == 0
    data = json.loads((tmp_path / "o" / "mk.json").read_text())
    assert data["columns"] == ["value", "support_size"]
    assert data["rows"][0][0] > 0


def test_rerun_is_byte_identical(tmp_path, monkeypatch):
    cfg = {**BASE, "experiments": [{"kind": "spectrum", "n": 4}, {"kind": "mk", "n": 4, "budget": 12},
                                   {"kind": "dynamics", "n_grid": [8], "t": [1.0]}]}
    path = write(tmp_path, cfg)
    assert main([str(path), "--out-dir", str(tmp_path / "a"), "--plot"]) == 0
    monkeypatch.setenv("NCG_LAB_JOBS", "2")
    assert main([str(path), "--out-dir", str(tmp_path / "b"), "--plot"]) == 0
    for f in sorted((tmp_path / "a").iterdir()):
        if f.name != "timings.txt":
            assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes(), f.name


def test_seed_override_changes_hash(tmp_path):
    path = write(tmp_path, {**BASE, "experiments": [{"kind": "verify"}]})
    a, b = load_config(path), load_config(path, seed=99)
    assert config_hash(a) != config_hash(b)
    c = dict(a, out_dir="elsewhere")
    assert config_hash(c) == config_hash(a)


def test_emit_plot_contract(tmp_path):
    series = (["x", "y"], [[1, 2.0], [2, 4.0]])
    svg = emit_plot(series)
    assert svg.count(b"<circle") == 2
    assert emit_plot(series) == svg
    assert emit_plot(series, tmp_path / "p.svg", logy=True) == (tmp_path / "p.svg").read_bytes()
    with pytest.raises(ValueError):
        emit_plot((["x", "y"], []))
    empty = tmp_path / "e.csv"
    empty.write_text("x,y\n")
    with pytest.raises(ValueError):
        emit_plot(empty)


def test_module_entry_point(tmp_path):
    path = write(tmp_path, {**BASE, "experiments": [{"kind": "spectrum", "n": 3}]})
    proc = subprocess.run([sys.executable, "-m", "ncg_lab", str(path), "--out-dir", str(tmp_path / "o")],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "spectrum: PASS" in proc.stdout
