"""Exit criteria for the package, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary under "acceptance criteria".
"""

import json
import math
import time

import numpy as np
import pytest

from oracles import u1_exact, u2_exact, u3_exact
from renyi_disks import SolverConfig, headline, solve_all
from renyi_disks.cli import main
from renyi_disks.simulator import simulate_batch
from renyi_disks.solver import residuals

TOTAL_DISKS = 4.48508592498075
VECTOR_SUM_X = 0.00226785060421
MEAN_SQUARE_SHIFT = 0.2325047203936


@pytest.fixture
def record(acceptance_log):
    def _record(number, title, ok, detail):
        acceptance_log.append(f"[{'PASS' if ok else 'FAIL'}] AC{number:<2} {title}: {detail}")
        print(acceptance_log[-1])
        assert ok, detail

    return _record


def _run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_ac01_headline_count(capsys, record):
    start = time.perf_counter()
    solution = solve_all(SolverConfig(), check_residuals=False)
    elapsed = time.perf_counter() - start
    code, out = _run_cli(capsys, "report", "--format", "json")
    printed = json.loads(out)["expected_total_disks"]
    err = abs(printed - TOTAL_DISKS)
    assert abs(headline(solution).expected_total_disks - printed) == 0
    record(1, "headline count", code == 0 and err <= 1e-10 and elapsed < 5,
           f"{printed!r} (err {err:.1e} <= 1e-10), solve {elapsed:.2f}s < 5s")


def test_ac02_headline_vector(solution, record):
    vx, vy = map(float, headline(solution).expected_vector_sum)
    err = abs(vx - VECTOR_SUM_X)
    record(2, "headline vector", err <= 1e-9 and abs(vy) <= 1e-12,
           f"({vx!r}, {vy:.1e}); x err {err:.1e} <= 1e-9, |y| <= 1e-12")


def test_ac03_headline_shift(solution, record):
    shift = headline(solution).mean_square_shift
    err = abs(shift - MEAN_SQUARE_SHIFT)
    record(3, "headline shift", err <= 1e-10, f"{shift!r} (err {err:.1e} <= 1e-10)")


def test_ac04_analytic_oracle(solution, record):
    x4 = np.linspace(0, 4, 400)
    x3 = np.linspace(0, 3, 400)
    e1 = np.max(np.abs(solution.u1(x4) - u1_exact(x4)))
    e2 = np.max(np.abs(solution.u2(x3) - u2_exact(x3)))
    e3 = np.max(np.abs(solution.u3(x3) - u3_exact(x3)))
    record(4, "analytic oracle", e1 <= 1e-12 and e2 <= 1e-11 and e3 <= 1e-11,
           f"u1 {e1:.1e} <= 1e-12 on [0,4]; u2 {e2:.1e}, u3 {e3:.1e} <= 1e-11 on [0,3]")


def test_ac05_residuals(solution, record):
    res = residuals(solution, points_per_block=25, order=128, seed=2024)
    worst = max(res.values())
    record(5, "residual suite", worst <= 1e-11,
           ", ".join(f"{k} {v:.1e}" for k, v in res.items()) + " <= 1e-11 (order-128 quadrature)")


def test_ac06_statistical_oracle(capsys, record):
    start = time.perf_counter()
    code, out = _run_cli(capsys, "compare", "--x", "5", "--samples", "1000000", "--seed", "0",
                         "--format", "json")
    elapsed = time.perf_counter() - start
    rows = json.loads(out)["rows"]
    zs = {row["feature"]: row["z_score"] for row in rows}
    ok = code == 0 and all(abs(z) <= 4 for z in zs.values()) and elapsed < 30
    record(6, "statistical oracle", ok,
           ", ".join(f"{k} z={z:+.2f}" for k, z in zs.items()) + f"; exit {code}; {elapsed:.1f}s < 30s")


def test_ac07_per_sample_identities(record):
    x = 5.0
    run = simulate_batch(x, seed=7, start=0, stop=100_000, keep_positions=True)
    identity = float(np.max(np.abs(run["L2"] - (run["K"] + 2 * run["E2"]))))
    pos = np.sort(run["positions"], axis=1)
    sep_ok = jam_ok = True
    for n in np.unique(run["K"]):
        rows = pos[run["K"] == n, :n]
        sep_ok &= bool(np.all(np.diff(rows, axis=1) >= 1 - 1e-12))
        sep_ok &= bool(np.all((rows >= 0) & (rows <= x - 1)))
        gaps = np.hstack([rows[:, :1], rows[:, 1:] - rows[:, :-1] - 1, x - rows[:, -1:] - 1])
        jam_ok &= bool(np.all(gaps < 1 + 1e-12))
    record(7, "per-sample identities", identity <= 1e-10 and sep_ok and jam_ok,
           f"max |L2-K-2E2| {identity:.1e} <= 1e-10; separation {sep_ok}; jamming {jam_ok}; 1e5 samples")


def test_ac08_continuity(solution, record):
    jumps = {name: max(solution.function(name).knot_jumps()[:3]) for name in ("u1", "u2", "u3")}
    record(8, "continuity", max(jumps.values()) <= 1e-11,
           ", ".join(f"{k} {v:.1e}" for k, v in jumps.items()) + " <= 1e-11 at k=2,3,4")


def test_ac09_self_convergence(record):
    base = headline(solve_all(SolverConfig(), check_residuals=False))
    fine = headline(solve_all(SolverConfig(fit_tol=1e-15, quad_order=128), check_residuals=False))
    diffs = [
        abs(base.expected_total_disks - fine.expected_total_disks),
        float(np.max(np.abs(base.expected_vector_sum - fine.expected_vector_sum))),
        abs(base.mean_square_shift - fine.mean_square_shift),
    ]
    record(9, "self-convergence", max(diffs) <= 1e-10,
           "changes " + ", ".join(f"{d:.1e}" for d in diffs) + " <= 1e-10")


def test_ac10_determinism(tmp_path, capsys, record):
    paths = [tmp_path / f"run{i}.json" for i in range(3)]
    for path, workers in zip(paths, ("1", "1", "2")):
        assert main(["simulate", "--seed", "42", "--workers", workers, "--out", str(path)]) == 0
    capsys.readouterr()
    blobs = [p.read_bytes() for p in paths]
    same = blobs[0] == blobs[1] == blobs[2]
    record(10, "determinism", same, "simulate --seed 42 (1e6 samples) byte-identical: "
           "repeat run and 2 workers")
