import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from holonomic import cli, gates, numkit, spherepaths as sp

PI = math.pi


def read_report(out):
    return json.loads((out / "report.json").read_text())


def test_parse_angle():
    assert cli.parse_angle("pi/8") == PI / 8
    assert cli.parse_angle("-3*pi/4 + 1") == pytest.approx(1 - 3 * PI / 4)
    assert cli.parse_angle(0.5) == 0.5
    for bad in ("__import__('os')", "pi**", "foo", "[1]"):
        with pytest.raises(cli.ConfigError):
            cli.parse_angle(bad)


def test_parse_range():
    key, vals = cli.parse_range("path.phi=pi/16:31*pi/16:31")
    assert key == "path.phi" and len(vals) == 31
    assert vals[0] == pytest.approx(PI / 16) and vals[-1] == pytest.approx(31 * PI / 16)
    assert cli.parse_range("theta=0, pi/2") == ("theta", [0.0, PI / 2])
    assert cli.parse_range("theta=") == ("theta", [])
    for bad in ("theta", "=1", "theta=1:2"):
        with pytest.raises(cli.ConfigError):
            cli.parse_range(bad)


def test_orange_slice_run(tmp_path, capsys):
    assert cli.main(["run", "--config", "pi8_orange_slice", "--out", str(tmp_path)]) == 0
    rep = read_report(tmp_path)
    assert rep["passed"] and rep["failed_stages"] == []
    assert rep["path_length"] == pytest.approx(2 * PI, abs=1e-10)
    assert rep["enclosed_angle"] == pytest.approx(PI / 8, abs=1e-10)
    assert rep["target_distance"] < 1e-6
    assert all(v >= 0 and math.isfinite(v) for v in rep["residuals"].values())
    gate = numkit.matrix_from_json(rep["gate_matrix"])
    target = gates.analytic_one_qubit(gates.GateSpec(PI / 3, PI / 7, PI / 8))
    assert numkit.gate_distance(gate, target) == pytest.approx(rep["target_distance"], abs=1e-15)
    assert "ok" in capsys.readouterr().out


def test_minimal_circle_run(tmp_path):
    assert cli.main(["run", "--config", "pi8_minimal_circle", "--out", str(tmp_path)]) == 0
    rep = read_report(tmp_path)
    assert rep["path_length"] == pytest.approx(PI * math.sqrt(15) / 4, abs=1e-8)
    assert rep["time_ratio_vs_orange_slice"] == pytest.approx(math.sqrt(15) / 8, abs=1e-10)


def test_output_files(tmp_path):
    cli.main(["run", "--config", "pi8_orange_slice", "--out", str(tmp_path), "--steps", "64",
              "--tol-gate", "1", "--tol-residual", "1"])
    with open(tmp_path / "pulses.csv") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["t", "re_omega0", "im_omega0", "re_omega1", "im_omega1", "delta"]
    assert len(rows) == 66
    with open(tmp_path / "trace_alpha_beta.csv") as fh:
        assert next(csv.reader(fh))[:3] == ["t", "alpha", "beta"]


def test_sharp_path_fails_at_gate_comparison(tmp_path):
    assert cli.main(["run", "--config", "sharp_circle_16_steps", "--out", str(tmp_path)]) == 1
    rep = read_report(tmp_path)
    assert not rep["passed"]
    assert "gate_comparison" in rep["failed_stages"]
    assert not rep["checks"]["gate_comparison"]["passed"]


def test_deterministic_reports(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        cli.main(["run", "--config", "pi8_minimal_circle", "--out", str(out), "--steps", "256",
                  "--tol-gate", "1", "--tol-residual", "1"])
    ra, rb = read_report(a), read_report(b)
    ra.pop("timing"), rb.pop("timing")
    assert json.dumps(ra) == json.dumps(rb)
    assert (a / "pulses.csv").read_bytes() == (b / "pulses.csv").read_bytes()


def test_two_qubit_cz(tmp_path):
    assert cli.main(["run", "--config", "two_qubit_cz", "--out", str(tmp_path)]) == 0
    gate = numkit.matrix_from_json(read_report(tmp_path)["gate_matrix"])
    assert numkit.gate_distance(gate, np.diag([1, 1, 1, -1])) < 1e-6


def test_custom_frame_from_file(tmp_path):
    from test_frames import tabulate
    from conftest import make_frame
    ref = make_frame(sp.minimal_circle(PI / 8), 0.0, 0.0)
    (tmp_path / "frame.json").write_text(json.dumps(tabulate(ref, 801)))
    cfg = {"frame": "custom", "custom_frame": "frame.json", "grid_steps": 1024,
           "target": {"matrix": numkit.matrix_to_json(
               gates.analytic_one_qubit(gates.GateSpec(0, 0, PI / 8)))},
           "tolerances": {"gate": 1e-6, "residual": 1e-4}}
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    rep = cli.run(tmp_path / "cfg.json")
    assert rep.target_distance < 1e-6


def test_bad_configs(tmp_path, capsys):
    assert cli.main(["run", "--config", str(tmp_path / "missing.json")]) == 2
    for cfg in ({"frame": "qutrit", "path": {"family": "orange_slice", "delta_beta": 1}},
                {"frame": "one_qubit"},
                {"path": {"family": "orange_slice", "delta_beta": 1}, "grid_steps": 8},
                {"path": {"segments": [{"kind": "meridian", "beta": 0, "alpha0": 0,
                                        "alpha1": 1}]}}):
        p = tmp_path / "bad.json"
        p.write_text(json.dumps(cfg))
        assert cli.main(["run", "--config", str(p), "--out", str(tmp_path / "o")]) == 2
    assert "error" in capsys.readouterr().err


def test_env_var_sets_default_out(tmp_path, monkeypatch):
    monkeypatch.setenv(cli.OUT_ENV, str(tmp_path / "env"))
    monkeypatch.chdir(tmp_path)
    cli.main(["run", "--config", "pi8_orange_slice", "--steps", "64", "--tol-gate", "1"])
    assert (tmp_path / "env" / "report.json").is_file()


def test_empty_sweep(tmp_path):
    code = cli.main(["sweep", "--template", "phi_sweep", "--range", "path.phi=",
                     "--out", str(tmp_path)])
    assert code == 0
    assert (tmp_path / "summary.csv").read_text().count("\n") == 1


def test_sweep_records_point_failures(tmp_path):
    template, _ = cli.load_config("phi_sweep")
    results = cli.sweep(template, [("path.phi", [PI / 8, 0.0, PI / 4])], tmp_path)
    assert [r is None for _, r, _ in results] == [False, True, False]
    assert results[1][2]
    rows = list(csv.DictReader(open(tmp_path / "summary.csv")))
    assert [r["passed"] for r in rows] == ["true", "false", "true"]


def test_phi_sweep_time_ratio(tmp_path):
    template, _ = cli.load_config("phi_sweep")
    template["grid_steps"] = 128
    template["tolerances"] = {"gate": 1.0, "residual": 1.0}
    phis = [k * PI / 16 for k in range(1, 32)]
    results = cli.sweep(template, [("path.phi", phis)], tmp_path, jobs=2)
    ratios = [r.time_ratio_vs_orange_slice for _, r, _ in results]
    assert [p["path.phi"] for p, _, _ in results] == phis
    for phi, ratio in zip(phis, ratios):
        assert ratio == pytest.approx(sp.time_ratio(phi), abs=1e-12)
        if phi == phis[15]:
            assert abs(ratio - 1) <= 1e-12
        else:
            assert ratio < 1
    header = (tmp_path / "summary.csv").read_text().splitlines()[0]
    assert header.startswith("path.phi,path_length,enclosed_angle,time_ratio")
    assert len(list((tmp_path / "reports").iterdir())) == 31


@pytest.mark.slow
def test_axis_grid_sweep(tmp_path):
    template, _ = cli.load_config("axis_sweep")
    ranges = [cli.parse_range("theta=0.3:2.8:5"), cli.parse_range("varphi=0:5:5")]
    results = cli.sweep(template, ranges, tmp_path, jobs=4)
    assert len(results) == 25
    assert all(r.target_distance < 1e-6 for _, r, _ in results)


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "holonomic", "run", "--config",
                           "pi8_orange_slice", "--steps", "64", "--tol-gate", "1",
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
