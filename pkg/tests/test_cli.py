"""End-to-end CLI tests: exit codes, file formats, determinism."""

import csv
import json
import subprocess
import sys

import numpy as np
import pytest

T2PI = 2.0 * np.pi

PENDULUM = {
    "family": "pendulum",
    "params": {"a": 0.04},
    "period": T2PI,
    "forcing": [{"mode": 1, "amplitude": 0.05}],
    "label": "pendulum",
}
ZERO = {
    "family": "zero",
    "params": {},
    "period": T2PI,
    "forcing": [{"mode": 1, "amplitude": 1.0}],
}
CUBIC = {
    "family": "cubic",
    "params": {"c3": 1.0},
    "period": T2PI,
    "forcing": [{"mode": 1, "amplitude": 5.0}],
}
TANH = {
    "family": "tanh_g",
    "params": {"s": 1.0},
    "period": T2PI,
    "forcing": [{"mode": 1, "amplitude": 0.5}],
}


def run_cli(*args, cwd):
    return subprocess.run([sys.executable, "-m", "oddperiodic", *args],
                          capture_output=True, text=True, cwd=cwd)


def write_config(tmp_path, cfg, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def read_record(stdout: str) -> dict:
    return json.loads(stdout)


class TestCertify:
    def test_holding_certificate_exits_zero(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        res = run_cli("certify", cfg, cwd=tmp_path)
        assert res.returncode == 0
        rec = read_record(res.stdout)
        assert rec["outcome"]["holds"] is True
        assert rec["outcome"]["lambda"] == pytest.approx(0.7895683520871487)
        assert rec["outcome"]["threshold"] == pytest.approx(0.05066059182116889)

    def test_failing_certificate_exits_three(self, tmp_path):
        cfg = write_config(tmp_path, dict(PENDULUM, params={"a": 1.0}))
        res = run_cli("certify", cfg, cwd=tmp_path)
        assert res.returncode == 3
        assert read_record(res.stdout)["outcome"]["holds"] is False

    def test_malformed_config_exits_two(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{nope")
        res = run_cli("certify", str(path), cwd=tmp_path)
        assert res.returncode == 2

    def test_unknown_key_exits_two(self, tmp_path):
        cfg = write_config(tmp_path, dict(PENDULUM, surprise=1))
        res = run_cli("certify", cfg, cwd=tmp_path)
        assert res.returncode == 2
        assert read_record(res.stdout)["error"]["code"] == "unknown_key"


class TestSolve:
    def test_zero_g_csv_matches_closed_form(self, tmp_path):
        cfg = write_config(tmp_path, ZERO)
        res = run_cli("solve", cfg, "--out", "sol.csv", cwd=tmp_path)
        assert res.returncode == 0
        with open(tmp_path / "sol.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        t = np.array([float(r["t"]) for r in rows])
        u = np.array([float(r["u"]) for r in rows])
        np.testing.assert_allclose(u, -np.sin(t), atol=1e-10)
        res_col = np.array([float(r["residual_pointwise"]) for r in rows])
        assert res_col.max() < 1e-10

    def test_pendulum_sidecar_regime(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        res = run_cli("solve", cfg, "--out", "p.csv", cwd=tmp_path)
        assert res.returncode == 0
        sidecar = json.loads((tmp_path / "p.csv.json").read_text())
        assert sidecar["outcome"]["regime"] == "certified_contraction"
        assert sidecar["outcome"]["converged"] is True
        assert sidecar["outcome"]["residual"] <= 1e-8

    def test_divergent_cubic_exits_four_with_diagnostics(self, tmp_path):
        cfg = write_config(tmp_path, CUBIC)
        res = run_cli("solve", cfg, "--method", "picard", "--out", "c.csv",
                      cwd=tmp_path)
        assert res.returncode == 4
        sidecar = json.loads((tmp_path / "c.csv.json").read_text())
        assert sidecar["outcome"]["converged"] is False
        assert sidecar["outcome"]["failure"] == "non_finite"
        tail = sidecar["outcome"]["step_norm_tail"]
        assert tail[-1] > tail[0]
        assert (tmp_path / "c.csv").exists()  # best iterate still written

    def test_auto_on_cubic_falls_back_to_picard(self, tmp_path):
        cfg = write_config(tmp_path, CUBIC)
        res = run_cli("solve", cfg, "--out", "c.csv", cwd=tmp_path)
        assert res.returncode == 4

    def test_sidecar_determinism(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        run_cli("solve", cfg, "--out", "a.csv", cwd=tmp_path)
        run_cli("solve", cfg, "--out", "b.csv", cwd=tmp_path)
        rec_a = json.loads((tmp_path / "a.csv.json").read_text())
        rec_b = json.loads((tmp_path / "b.csv.json").read_text())
        for rec in (rec_a, rec_b):
            del rec["wall_time_s"]
            rec["options"]["out"] = "X"
        assert json.dumps(rec_a, sort_keys=True) == json.dumps(rec_b, sort_keys=True)
        csv_a = (tmp_path / "a.csv").read_bytes()
        csv_b = (tmp_path / "b.csv").read_bytes()
        assert csv_a == csv_b

    def test_record_round_trips(self, tmp_path):
        cfg = write_config(tmp_path, ZERO)
        res = run_cli("solve", cfg, "--out", "z.csv", cwd=tmp_path)
        rec = read_record(res.stdout)
        assert json.loads(json.dumps(rec)) == rec

    def test_modes_flag_sets_grid_size(self, tmp_path):
        cfg = write_config(tmp_path, ZERO)
        res = run_cli("solve", cfg, "--modes", "64", "--out", "m.csv",
                      cwd=tmp_path)
        assert res.returncode == 0
        n_rows = len((tmp_path / "m.csv").read_text().splitlines()) - 1
        assert n_rows == 4 * 64  # csv rows live on the 4N grid


class TestVerify:
    def test_verify_solver_output_passes(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        run_cli("solve", cfg, "--out", "p.csv", cwd=tmp_path)
        res = run_cli("verify", cfg, "p.csv", cwd=tmp_path)
        assert res.returncode == 0
        rec = read_record(res.stdout)
        assert rec["outcome"]["passed"] is True
        assert rec["outcome"]["distance"] <= 1e-6

    def test_verify_exact_closed_form_file(self, tmp_path):
        # hand-built CSV for the zero-g problem: u = -sin t
        cfg = write_config(tmp_path, ZERO)
        P = 256
        t = np.arange(P) * (T2PI / P)
        with open(tmp_path / "exact.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "u", "u_prime", "residual_pointwise"])
            for tj in t:
                writer.writerow([repr(float(tj)), repr(float(-np.sin(tj))),
                                 repr(float(-np.cos(tj))), "0.0"])
        res = run_cli("verify", cfg, "exact.csv", cwd=tmp_path)
        assert res.returncode == 0

    def test_corrupted_column_fails_with_five(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        run_cli("solve", cfg, "--out", "p.csv", cwd=tmp_path)
        lines = (tmp_path / "p.csv").read_text().splitlines()
        fields = lines[40].split(",")
        fields[1] = repr(float(fields[1]) + 0.25)  # single-point spike
        lines[40] = ",".join(fields)
        (tmp_path / "bad.csv").write_text("\n".join(lines) + "\n")
        res = run_cli("verify", cfg, "bad.csv", cwd=tmp_path)
        assert res.returncode == 5
        assert read_record(res.stdout)["outcome"]["verdict"] == "not_odd_periodic"

    def test_odd_coherent_corruption_fails_on_distance(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        run_cli("solve", cfg, "--out", "p.csv", cwd=tmp_path)
        with open(tmp_path / "p.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        header, data = rows[0], rows[1:]
        for row in data:
            t = float(row[0])
            row[1] = repr(float(row[1]) + 0.1 * float(np.sin(2 * t)))
        with open(tmp_path / "bad.csv", "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(header)
            w.writerows(data)
        res = run_cli("verify", cfg, "bad.csv", cwd=tmp_path)
        assert res.returncode == 5
        rec = read_record(res.stdout)
        assert rec["outcome"]["verdict"] == "fail"
        assert rec["outcome"]["distance"] == pytest.approx(0.1, rel=0.1)

    def test_unreadable_solution_exits_two(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        res = run_cli("verify", cfg, "missing.csv", cwd=tmp_path)
        assert res.returncode == 2


class TestSweep:
    def test_period_sweep_brackets_threshold(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        res = run_cli("sweep", cfg, "--param", "period", "--from", "1",
                      "--to", "12", "--steps", "23", "--out", "s.csv",
                      cwd=tmp_path)
        assert res.returncode == 0
        with open(tmp_path / "s.csv", newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 23
        threshold = np.sqrt(2.0 / 0.04)
        for prev, cur in zip(rows, rows[1:]):
            a, b = float(prev["param"]), float(cur["param"])
            if prev["holds"] != cur["holds"]:
                assert a < threshold < b

    def test_amplitude_sweep_threshold(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        res = run_cli("sweep", cfg, "--param", "a", "--from", "0.04",
                      "--to", "0.06", "--steps", "5", "--out", "s.csv",
                      cwd=tmp_path)
        assert res.returncode == 0
        with open(tmp_path / "s.csv", newline="") as fh:
            rows = {float(r["param"]): r["holds"] for r in csv.DictReader(fh)}
        assert rows[0.04] == "true" and rows[0.05] == "true"
        assert rows[0.055] == "false" and rows[0.06] == "false"

    def test_zero_width_sweep_matches_single_solve(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        res = run_cli("sweep", cfg, "--param", "period", "--from",
                      repr(T2PI), "--to", repr(T2PI), "--steps", "1",
                      "--out", "s.csv", cwd=tmp_path)
        assert res.returncode == 0
        with open(tmp_path / "s.csv", newline="") as fh:
            row = next(csv.DictReader(fh))
        assert row["holds"] == "true" and row["converged"] == "true"
        assert float(row["lambda"]) == pytest.approx(0.7895683520871487)
        run_cli("solve", cfg, "--out", "p.csv", cwd=tmp_path)
        sidecar = json.loads((tmp_path / "p.csv.json").read_text())
        assert float(row["residual"]) == pytest.approx(
            sidecar["outcome"]["residual"], abs=1e-10)

    def test_bad_range_exits_two(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        res = run_cli("sweep", cfg, "--param", "period", "--from", "5",
                      "--to", "1", "--steps", "3", "--out", "s.csv",
                      cwd=tmp_path)
        assert res.returncode == 2
        res = run_cli("sweep", cfg, "--param", "nonsense", "--from", "1",
                      "--to", "2", "--steps", "2", "--out", "s.csv",
                      cwd=tmp_path)
        assert res.returncode == 2


class TestCompare:
    def test_pendulum_three_way_agreement(self, tmp_path):
        cfg = write_config(tmp_path, PENDULUM)
        res = run_cli("compare", cfg, cwd=tmp_path)
        assert res.returncode == 0
        rec = read_record(res.stdout)
        distances = rec["outcome"]["distances"]
        assert len(distances) == 3
        assert all(d <= 1e-6 for d in distances.values())

    def test_tanh_flags_uncertified_picard(self, tmp_path):
        cfg = write_config(tmp_path, TANH)
        res = run_cli("compare", cfg, cwd=tmp_path)
        assert res.returncode == 0
        rec = read_record(res.stdout)
        assert rec["outcome"]["methods"]["picard"]["regime"] == "uncertified_picard"
        d = rec["outcome"]["distances"]
        assert d["continuation_vs_shooting"] <= 1e-6

    def test_zero_problem_all_methods_zero(self, tmp_path):
        cfg = write_config(tmp_path, dict(ZERO, forcing=[]))
        res = run_cli("compare", cfg, cwd=tmp_path)
        assert res.returncode == 0
        rec = read_record(res.stdout)
        assert rec["outcome"]["methods"]["picard"]["solution_norm"] == 0.0
        assert all(d <= 1e-10 for d in rec["outcome"]["distances"].values())

    def test_cubic_exits_four(self, tmp_path):
        cfg = write_config(tmp_path, CUBIC)
        res = run_cli("compare", cfg, cwd=tmp_path)
        assert res.returncode == 4
