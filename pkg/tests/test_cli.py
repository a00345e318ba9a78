import csv
import json
from pathlib import Path

import numpy as np
import pytest
from click.testing import CliRunner

from spinmagic.cli import main, sweep_time_window


@pytest.fixture
def runner():
    return CliRunner()


def _read_csv(path):
    with open(path, encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_unitary_writes_outputs(tmp_path, runner):
    out = tmp_path / "run"
    res = runner.invoke(
        main,
        ["unitary", "--model", "xxz", "--sizes", "4", "--t-max", "10",
         "--burn-in", "2", "--n-random", "5", "--out", str(out)],
        catch_exceptions=False,
    )
    assert res.exit_code == 0
    series = _read_csv(out / "unitary_series_xxz_L4.csv")
    assert list(series[0].keys()) == ["t", "sre"]
    assert float(series[0]["t"]) == 0.0
    assert abs(float(series[0]["sre"])) < 1e-12  # Neel start
    summary = _read_csv(out / "unitary_summary_xxz.csv")
    assert len(summary) == 1
    assert float(summary[0]["ln_dim"]) == pytest.approx(np.log(6))
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["command"] == "unitary"
    assert manifest["params"]["master_seed"] == 1234


def test_unitary_deterministic(tmp_path, runner):
    args = ["unitary", "--model", "syk", "--sizes", "4", "--t-max", "5",
            "--burn-in", "1", "--n-disorder", "2", "--n-random", "3",
            "--master-seed", "7"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    runner.invoke(main, args + ["--out", str(out1)], catch_exceptions=False)
    runner.invoke(main, args + ["--out", str(out2)], catch_exceptions=False)
    for name in ("unitary_series_syk_L4.csv", "unitary_summary_syk.csv"):
        assert (out1 / name).read_text() == (out2 / name).read_text()


def test_sweep_schema_and_determinism(tmp_path, runner):
    args = ["sweep", "--model", "xxz", "--sizes", "4", "--gammas", "0.5,5.0",
            "--n-traj", "3", "--t-max", "4", "--burn-in", "2",
            "--no-auto-time", "--master-seed", "3"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    r1 = runner.invoke(main, args + ["--workers", "1", "--out", str(out1)], catch_exceptions=False)
    assert r1.exit_code == 0, r1.output
    r2 = runner.invoke(main, args + ["--workers", "2", "--out", str(out2)], catch_exceptions=False)
    assert (out1 / "sweep_xxz.csv").read_text() == (out2 / "sweep_xxz.csv").read_text()
    rows = _read_csv(out1 / "sweep_xxz.csv")
    assert [r["gamma"] for r in rows] == [f"{0.5:.17e}", f"{5.0:.17e}"]
    assert float(rows[0]["mean_sre"]) > float(rows[1]["mean_sre"])


def test_sweep_config_file_and_override(tmp_path, runner):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "model": "xxz", "sizes": "4", "gammas": "1.0", "n_traj": 2,
        "t_max": 3.0, "burn_in": 1.0, "auto_time": False, "master_seed": 5,
    }))
    out = tmp_path / "out"
    res = runner.invoke(
        main,
        ["sweep", "--config", str(cfg), "--gammas", "2.0", "--out", str(out)],
        catch_exceptions=False,
    )
    assert res.exit_code == 0, res.output
    rows = _read_csv(out / "sweep_xxz.csv")
    # flag wins over config file
    assert float(rows[0]["gamma"]) == 2.0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["params"]["master_seed"] == 5


def test_sweep_records_failures_and_continues(tmp_path, runner):
    # L=14 basis is valid but sre rejects L>14; use an invalid gamma instead
    out = tmp_path / "out"
    res = runner.invoke(
        main,
        ["sweep", "--model", "xxz", "--sizes", "4", "--gammas", "-1.0,0.5",
         "--n-traj", "2", "--t-max", "3", "--burn-in", "1", "--no-auto-time",
         "--out", str(out)],
    )
    assert res.exit_code == 4
    rows = _read_csv(out / "sweep_xxz.csv")
    assert len(rows) == 1  # good point survived
    manifest = json.loads((out / "manifest.json").read_text())
    assert len(manifest["errors"]) == 1


def test_fit_command(tmp_path, runner):
    from spinmagic.analysis import lorentzian

    rng = np.random.default_rng(0)
    rows = []
    for L, A in ((6, 3.0), (8, 4.0)):
        for g in np.logspace(-2, 1, 10):
            f = lorentzian(g, A, 0.2, 1.5)
            rows.append({
                "model": "xxz", "L": L, "gamma": f"{g:.17e}",
                "mean_sre": f"{f * (1 + rng.normal(0, 0.01)):.17e}",
                "stderr": f"{0.01 * f:.17e}", "n_traj": 8,
                "t0": "0", "t1": "1", "stationary": 1,
            })
    sweep_csv = tmp_path / "sweep.csv"
    with open(sweep_csv, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    out = tmp_path / "fits"
    res = runner.invoke(
        main, ["fit", "--sweep-csv", str(sweep_csv), "--out", str(out)],
        catch_exceptions=False,
    )
    assert res.exit_code == 0, res.output
    fits = _read_csv(out / "fits_xxz.csv")
    assert [r["L"] for r in fits] == ["6", "8"]
    assert float(fits[0]["A"]) == pytest.approx(3.0, rel=0.05)
    assert float(fits[1]["A"]) == pytest.approx(4.0, rel=0.05)
    assert all(r["converged"] == "1" for r in fits)
    slopes = _read_csv(out / "slopes_xxz.csv")
    assert not slopes  # fewer than 3 sizes per gamma


def test_random_state_command(tmp_path, runner):
    out = tmp_path / "rs"
    res = runner.invoke(
        main,
        ["random-state", "--sizes", "4,6", "--n-states", "5", "--out", str(out)],
        catch_exceptions=False,
    )
    assert res.exit_code == 0
    rows = _read_csv(out / "random_state.csv")
    assert {r["kind"] for r in rows} == {"phase", "haar"}
    assert len(rows) == 4


def test_lindblad_check_passes(tmp_path, runner):
    out = tmp_path / "lind"
    res = runner.invoke(
        main,
        ["lindblad-check", "--size", "4", "--gamma", "0.5", "--n-traj", "300",
         "--t-max", "1.0", "--out", str(out)],
        catch_exceptions=False,
    )
    assert res.exit_code == 0, res.output
    summary = json.loads((out / "lindblad_summary.json").read_text())
    assert summary["pass"] is True
    assert summary["max_abs_z"] <= 4.0
    report = _read_csv(out / "lindblad_report.csv")
    assert list(report[0].keys()) == ["t", "site", "traj_mean", "traj_stderr", "lindblad", "z"]


def test_lindblad_check_gamma_zero_exact(tmp_path, runner):
    out = tmp_path / "lind0"
    res = runner.invoke(
        main,
        ["lindblad-check", "--size", "4", "--gamma", "0.0", "--n-traj", "3",
         "--t-max", "1.0", "--out", str(out)],
        catch_exceptions=False,
    )
    assert res.exit_code == 0, res.output
    summary = json.loads((out / "lindblad_summary.json").read_text())
    assert summary["pass"] is True
    assert summary["max_abs_z"] < 1e-8


def test_lindblad_check_rejects_large_L(tmp_path, runner):
    res = runner.invoke(
        main,
        ["lindblad-check", "--size", "8", "--out", str(tmp_path / "x")],
    )
    assert res.exit_code != 0


def test_sweep_time_window_rule():
    assert sweep_time_window(1.0, 20.0, 10.0, True) == (20.0, 10.0)
    t, b = sweep_time_window(0.01, 20.0, 10.0, False)
    assert (t, b) == (20.0, 10.0)
    t, b = sweep_time_window(0.01, 20.0, 10.0, True)
    assert t == 600.0 and b == 300.0
    t, b = sweep_time_window(1e-4, 20.0, 10.0, True)
    assert t == 2400.0
