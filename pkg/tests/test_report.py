import json
import math

import numpy as np
import pytest

from renyi_disks import SolverConfig, solve_all
from renyi_disks.exceptions import OutOfDomain
from renyi_disks.report import (
    ComparisonRow,
    comparison_text,
    compare,
    headline,
    headline_text,
)
from renyi_disks.simulator import McEstimate, estimate, simulate


def test_headline_matches_published_constants(solution):
    h = headline(solution)
    assert abs(h.expected_total_disks - 4.48508592498075) <= 1e-10
    assert abs(h.expected_vector_sum[0] - 0.00226785060421) <= 1e-9
    assert abs(h.expected_vector_sum[1]) <= 1e-12
    assert abs(h.mean_square_shift - 0.2325047203936) <= 1e-10
    assert 1 <= h.expected_total_disks <= 6


def test_headline_needs_five():
    with pytest.raises(OutOfDomain):
        headline(solve_all(SolverConfig(x_max=4.0), check_residuals=False))


def test_headline_serialisation(solution):
    data = headline(solution).to_dict()
    assert list(data) == ["expected_total_disks", "expected_vector_sum", "mean_square_shift"]
    assert json.loads(json.dumps(data)) == data
    lines = headline_text(headline(solution)).splitlines()
    assert len(lines) == 3
    assert lines[0].split()[-1] == "4.4850859249808"


def test_compare_trivial_point(solution):
    est = estimate(0.5, 1000, seed=0)
    rep = compare(solution, est, 0.5)
    assert rep.ok
    assert all(row.z_score == 0.0 for row in rep.rows)
    assert [row.feature for row in rep.rows] == ["K", "F_x", "F_y", "E2", "L2"]


def test_z_score_edge_cases():
    assert ComparisonRow("K", 1.0, 1.0, 0.0).z_score == 0.0
    assert ComparisonRow("K", 1.0, 0.0, 0.0).z_score == math.inf
    row = ComparisonRow("K", 1.0, 0.5, 0.1)
    assert row.z_score == pytest.approx(5.0) and row.flagged


def test_compare_detects_a_wrong_solver_value(solution):
    est = estimate(5.0, 200_000, seed=4)
    assert compare(solution, est, 5.0).ok
    shifted = dict(est)
    k = est["K"]
    shifted["K"] = McEstimate(k.mean + 10 * k.std_error, k.std_error, k.n_samples, k.seed)
    bad = compare(solution, shifted, 5.0)
    assert not bad.ok and bad.rows[0].flagged
    assert "MISMATCH" in comparison_text(bad)
    assert bad.to_dict()["ok"] is False


@pytest.mark.slow
def test_self_convergence():
    base = headline(solve_all(SolverConfig(), check_residuals=False))
    fine = headline(solve_all(SolverConfig(fit_tol=1e-15, quad_order=128), check_residuals=False))
    assert abs(base.expected_total_disks - fine.expected_total_disks) <= 1e-10
    assert np.max(np.abs(base.expected_vector_sum - fine.expected_vector_sum)) <= 1e-10
    assert abs(base.mean_square_shift - fine.mean_square_shift) <= 1e-10


def test_mean_square_shift_two_ways(solution):
    raw = simulate(5.0, 400_000, seed=31)
    row = np.array([math.cos(math.pi / 3), -math.sin(math.pi / 3)])
    shift = 1 + 2 * raw["F"] @ row + raw["L2"]
    se = shift.std(ddof=1) / math.sqrt(len(shift))
    mc = math.fsum(shift.tolist()) / len(shift)
    assert abs(mc - headline(solution).mean_square_shift) <= 4 * se
