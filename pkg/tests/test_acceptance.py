"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines and the reported slack figures.
"""

import csv
import json
import subprocess
import sys
import time

import numpy as np
import pytest

from oddperiodic import (
    MajorantError,
    Nonlinearity,
    OddPeriodicFunction,
    ProblemError,
    apriori_bound,
    builtin,
    certify,
    cross_validate,
    differentiate,
    integrate_ivp,
    invert_second_derivative,
    make_problem,
    mean,
    solve_continuation,
    solve_picard,
    sup_norm,
    uniqueness_probe,
)

T2PI = 2.0 * np.pi
SEED = 1337


def _line(num, name, ok, detail):
    print(f"[criterion {num}] {name}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {num} failed: {detail}"


def _random_functions(count=1000, max_modes=64):
    rng = np.random.default_rng(SEED)
    out = []
    for _ in range(count):
        modes = int(rng.integers(1, max_modes + 1))
        period = float(rng.uniform(0.5, 20.0))
        out.append(OddPeriodicFunction(period, rng.uniform(-1.0, 1.0, modes)))
    return out


def test_criterion_1_operator_correctness():
    t0 = time.perf_counter()
    funcs = _random_functions()
    worst = 0.0
    for u in funcs:
        norm_u = sup_norm(u)
        back = invert_second_derivative(differentiate(u, 2))
        worst = max(worst, sup_norm(back - u) / norm_u)
        forth = differentiate(invert_second_derivative(u), 2)
        worst = max(worst, sup_norm(forth - u) / norm_u)
    gains_exact = True
    rng = np.random.default_rng(SEED + 1)
    for _ in range(200):
        n = int(rng.integers(1, 65))
        T = float(rng.uniform(0.5, 20.0))
        coeffs = np.zeros(n)
        coeffs[-1] = 1.0
        got = invert_second_derivative(OddPeriodicFunction(T, coeffs)).coeffs[-1]
        gains_exact &= got == -((T / (2 * np.pi * n)) ** 2)
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-12 and gains_exact and elapsed < 5.0
    _line(1, "operator round trips and exact per-mode gains", ok,
          f"max rel defect {worst:.2e}, gains exact: {gains_exact}, {elapsed:.2f} s")


def test_criterion_2_norm_bound_never_violated():
    funcs = _random_functions()
    max_ratio = 0.0
    violated = False
    for f in funcs:
        ratio = sup_norm(invert_second_derivative(f)) / (
            (f.period**2 / 2.0) * sup_norm(f))
        violated |= ratio > 1.0
        max_ratio = max(max_ratio, ratio)
    _line(2, "certified norm bound sup|S f| <= (T^2/2) sup|f|", not violated,
          f"max observed ratio {max_ratio:.3e} of the certified constant")


def test_criterion_3_zero_mean_and_parity_chain():
    funcs = _random_functions()
    worst_mean = 0.0
    worst_parity = 0.0
    for u in funcs:
        norm_u = sup_norm(u)
        worst_mean = max(worst_mean, abs(mean(u)) / norm_u)
        up = differentiate(u, 1)
        upp = differentiate(u, 2)
        t = np.arange(1, 128) * (u.period / 256)
        worst_parity = max(worst_parity,
                           float(np.max(np.abs(up(t) - up(-t)))),
                           float(np.max(np.abs(upp(t) + upp(-t)))) / max(norm_u, 1.0))
    ok = worst_mean <= 1e-14 and worst_parity <= 1e-12
    _line(3, "odd => zero mean; derivative parity chain", ok,
          f"max |mean|/sup {worst_mean:.2e}, max parity defect {worst_parity:.2e}")


def test_criterion_4_certified_contraction_regime():
    t0 = time.perf_counter()
    p = builtin("pendulum", {"a": 0.04}, period=T2PI, forcing=[(1, 0.05)])
    cert = certify(p)
    report = solve_picard(p)
    s = report.step_norms
    ratios_ok = all(s[j + 1] <= cert.factor * s[j] * (1 + 1e-8)
                    for j in range(1, len(s) - 1))
    probe = uniqueness_probe(p, 5)
    cv = cross_validate(p, report.solution, tol=1e-6)
    elapsed = time.perf_counter() - t0
    ok = (cert.holds and abs(cert.factor - 0.7895683520871487) < 1e-12
          and report.converged and ratios_ok
          and probe.agrees and probe.max_distance <= 1e-10
          and cv.distance <= 1e-6 and report.residual <= 1e-8
          and elapsed < 2.0)
    _line(4, "certified Picard on the weak pendulum", ok,
          f"lambda {cert.factor:.5f}, {report.iterations} iters, "
          f"probe dist {probe.max_distance:.1e}, oracle dist {cv.distance:.1e}, "
          f"residual {report.residual:.1e}, {elapsed:.2f} s")


def test_criterion_5_exact_linear_fixed_point():
    p = builtin("linear", {"c": 0.01}, period=T2PI, forcing=[(1, 1.0)])
    report = solve_picard(p)
    exact = OddPeriodicFunction(T2PI, [1.0 / (0.01 - 1.0)])
    dist = sup_norm(report.solution - exact.with_modes(report.solution.modes))
    _line(5, "linear g: solver hits the analytic fixed point", dist <= 1e-8,
          f"sup distance to (1/(0.01-1)) sin t is {dist:.2e}")


def test_criterion_6_sublinear_continuation_regime():
    p = builtin("tanh_g", {"s": 1.0}, period=T2PI, forcing=[(1, 0.5)])
    bound = apriori_bound(p)
    report = solve_continuation(p)
    cv = cross_validate(p, report.solution, tol=1e-6)
    ok = (report.converged and report.lambda_path[-1] == 1.0
          and report.residual <= 1e-8 and cv.distance <= 1e-6
          and abs(bound - 29.608813203268074) < 1e-9
          and report.max_iterate_norm <= bound)
    _line(6, "sublinear continuation with a-priori bound", ok,
          f"path {len(report.lambda_path)} stages, residual {report.residual:.1e}, "
          f"oracle dist {cv.distance:.1e}, max iterate {report.max_iterate_norm:.3f} "
          f"<= bound {bound:.3f}")


def test_criterion_7_certificate_threshold_sweep(tmp_path):
    cfg = {"family": "pendulum", "params": {"a": 0.04}, "period": T2PI,
           "forcing": [{"mode": 1, "amplitude": 0.05}]}
    cfg_path = tmp_path / "p.json"
    cfg_path.write_text(json.dumps(cfg))
    res = subprocess.run(
        [sys.executable, "-m", "oddperiodic", "sweep", str(cfg_path),
         "--param", "period", "--from", "1", "--to", "12", "--steps", "23",
         "--out", "sweep.csv"],
        capture_output=True, text=True, cwd=tmp_path)
    assert res.returncode == 0, res.stdout + res.stderr
    with open(tmp_path / "sweep.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    threshold = np.sqrt(2.0 / 0.04)
    flips = [(float(a["param"]), float(b["param"]))
             for a, b in zip(rows, rows[1:]) if a["holds"] != b["holds"]]
    ok = len(flips) == 1 and flips[0][0] < threshold < flips[0][1]
    _line(7, "certificate flips at the period threshold", ok,
          f"flip between T = {flips[0][0]:.3f} and {flips[0][1]:.3f}, "
          f"threshold sqrt(2/0.04) = {threshold:.4f}" if flips else "no flip found")


def test_criterion_8_rk4_order():
    p = builtin("linear", {"c": 1.0}, period=T2PI, forcing=[])
    errs = []
    for n in (64, 128):
        traj = integrate_ivp(p, 0.0, 1.0, np.pi, steps=n)
        errs.append(float(np.hypot(traj.u[-1] - 0.0, traj.v[-1] + 1.0)))
    ratio = errs[0] / errs[1]
    ok = 12.0 <= ratio <= 20.0
    _line(8, "RK4 error drops ~16x when the step is halved", ok,
          f"e(h)/e(h/2) = {ratio:.3f} on the harmonic oscillator")


def test_criterion_9_negative_controls(tmp_path):
    # (a) planted even perturbation must fail validation
    crooked = Nonlinearity("crooked", lambda x: 0.04 * np.sin(x) + 0.01,
                           lambda x: 0.04 * np.cos(x), gprime_bound=0.04)
    with pytest.raises(ProblemError):
        make_problem(T2PI, crooked, [(1, 0.05)])

    # (b) corrupted solution file must fail verification with exit 5
    cfg = {"family": "pendulum", "params": {"a": 0.04}, "period": T2PI,
           "forcing": [{"mode": 1, "amplitude": 0.05}]}
    cfg_path = tmp_path / "p.json"
    cfg_path.write_text(json.dumps(cfg))
    run = lambda *a: subprocess.run(
        [sys.executable, "-m", "oddperiodic", *a],
        capture_output=True, text=True, cwd=tmp_path)
    assert run("solve", str(cfg_path), "--out", "p.csv").returncode == 0
    lines = (tmp_path / "p.csv").read_text().splitlines()
    fields = lines[17].split(",")
    fields[1] = repr(float(fields[1]) + 0.3)
    lines[17] = ",".join(fields)
    (tmp_path / "bad.csv").write_text("\n".join(lines) + "\n")
    verify = run("verify", str(cfg_path), "bad.csv")
    exit5 = verify.returncode == 5

    # (c) cubic family has no usable majorant
    p = builtin("cubic", {"c3": 1.0}, period=T2PI, forcing=[(1, 1.0)])
    with pytest.raises(MajorantError):
        apriori_bound(p)

    _line(9, "negative controls reject as specified", exit5,
          f"even-perturbed g rejected; corrupted file exit {verify.returncode}; "
          "cubic a-priori bound refused")
