import json
import subprocess
import sys

import numpy as np
import pytest

from ivbounds.cli import main


def run_cli(args):
    """Run in-process, capturing exit code."""
    return main(args)


class TestSimulateCommand:
    def test_writes_schema_and_latents(self, tmp_path, capsys):
        out = tmp_path / "sim.csv"
        code = run_cli(["simulate", "--rho", "0", "--n", "5000", "--seed", "7",
                        "--out", str(out), "--emit-latents"])
        assert code == 0
        header = out.read_text().splitlines()[0]
        assert header == "y,d,z"
        sidecar = tmp_path / "sim.latents.csv"
        assert sidecar.exists()
        assert sidecar.read_text().splitlines()[0] == "D0,D1,T,Y1,Y0"

    def test_bad_rho_exits_2(self, tmp_path, capsys):
        code = run_cli(["simulate", "--rho", "2", "--n", "10",
                        "--out", str(tmp_path / "x.csv")])
        assert code == 2
        assert "error:" in capsys.readouterr().err

    def test_determinism(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(["simulate", "--rho", "0.33", "--n", "3000", "--seed", "9", "--out", str(a)])
        run_cli(["simulate", "--rho", "0.33", "--n", "3000", "--seed", "9", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


@pytest.fixture(scope="module")
def sim_csv(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "sim.csv"
    assert run_cli(["simulate", "--rho", "0", "--n", "40000", "--seed", "11",
                    "--out", str(path)]) == 0
    return path


class TestAnalyzeCommand:
    def test_report_content(self, sim_csv, tmp_path, capsys):
        out = tmp_path / "report.json"
        code = run_cli(["analyze", "--data", str(sim_csv), "--grid", "9",
                        "--out", str(out)])
        assert code == 0
        r = json.loads(out.read_text())
        assert r["schema_version"] == 1
        assert r["robust"]["active_menus"] == ["A2", "A3"]
        assert r["menus"]["A1"]["empty"] is True
        assert r["menus"]["A2"]["summary"]["empty"] is False
        assert set(r["robust"]["entries"]) == {
            f"theta_{z}{t}" for z in "01" for t in ("a", "c", "df", "n")
        } | {
            f"delta_{d}{t}" for d in "01" for t in ("a", "c", "df", "n")
        } | {"p_a", "p_c", "p_df", "p_n"}
        assert r["inference"]["relabeled_instrument"] is True

    def test_missing_column_exits_2(self, sim_csv, capsys):
        code = run_cli(["analyze", "--data", str(sim_csv), "--y", "nope"])
        assert code == 2
        assert "nope" in capsys.readouterr().err

    def test_deterministic_output(self, sim_csv, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run_cli(["analyze", "--data", str(sim_csv), "--grid", "7", "--out", str(a)])
        run_cli(["analyze", "--data", str(sim_csv), "--grid", "7", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_outcome_range_flags(self, sim_csv, tmp_path, capsys):
        code = run_cli(["analyze", "--data", str(sim_csv), "--grid", "5",
                        "--y-min", "-10", "--y-max", "10",
                        "--out", str(tmp_path / "r.json")])
        assert code == 0
        r = json.loads((tmp_path / "r.json").read_text())
        assert r["input"]["outcome_range"] == [-10.0, 10.0]


class TestTestAndCiCommands:
    def test_test_command(self, sim_csv, capsys):
        assert run_cli(["test", "--data", str(sim_csv)]) == 0
        r = json.loads(capsys.readouterr().out)
        assert r["menus_data_consistent"]["A3"] is True
        assert r["validity"]["slack_d1"] > 0

    def test_ci_command(self, sim_csv, capsys):
        assert run_cli(["ci", "--data", str(sim_csv), "--level", "0.9"]) == 0
        r = json.loads(capsys.readouterr().out)
        for key in ("delta_1a", "delta_0n", "total_c"):
            b = r["bounds"][key]
            assert b["ci"]["lo"] <= b["lb"] <= b["ub"] <= b["ci"]["hi"]


class TestReplicateCommand:
    def test_small_simulation_target_runs(self, capsys):
        # undersized run: format and exit-code semantics, not the tolerances
        code = run_cli(["replicate", "table1", "--n", "200000"])
        out = capsys.readouterr().out
        assert "checks passed" in out
        assert all(line.startswith(("PASS", "FAIL")) for line in out.splitlines()[:-1])
        assert code in (0, 1)

    def test_figure2_target_small(self, capsys):
        code = run_cli(["replicate", "figure2", "--n", "150000", "--grid", "9"])
        out = capsys.readouterr().out
        assert code == 0, out
        assert "FAIL" not in out

    def test_figure2_band_series(self, tmp_path, capsys):
        bands = tmp_path / "bands.csv"
        code = run_cli(["replicate", "figure2", "--n", "150000", "--grid", "9",
                        "--bands-out", str(bands)])
        assert code == 0
        lines = bands.read_text().splitlines()
        assert lines[0] == "p_df,theta_c_lo,theta_c_hi,theta_df_lo,theta_df_hi"
        data = np.loadtxt(str(bands), delimiter=",", skiprows=1)
        assert data.shape[1] == 5
        assert np.all(np.diff(data[:, 0]) > 0)

    def test_card_needs_data(self, capsys):
        assert run_cli(["replicate", "card"]) == 2
        assert "needs --data" in capsys.readouterr().err


def test_console_entrypoint_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "ivbounds", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "ivbounds" in proc.stdout
