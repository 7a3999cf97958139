"""Headline constants of the disk-accretion problem and solver-vs-simulation tables."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import OutOfDomain
from .geometry import rotation
from .simulator import McEstimate
from .solver import Solution

Z_THRESHOLD = 4.0
SIG_DIGITS = 14

# row vector (1, 0) Q(1)
_FIRST_DISK_ROW = np.array([math.cos(math.pi / 3), -math.sin(math.pi / 3)])


@dataclass(frozen=True)
class HeadlineResults:
    expected_total_disks: float
    expected_vector_sum: np.ndarray
    mean_square_shift: float

    def to_dict(self) -> dict:
        return {
            "expected_total_disks": float(self.expected_total_disks),
            "expected_vector_sum": [float(v) for v in self.expected_vector_sum],
            "mean_square_shift": float(self.mean_square_shift),
        }


def headline(solution: Solution) -> HeadlineResults:
    """Expected disk count, vector sum of centres and mean square shift.

    With the first disk at ``(1, 0)`` the remaining disks park on ``[1, 6]``,
    which is ``[0, 5]`` rotated by ``Q(1)``.
    """
    if solution.x_max < 5:
        raise OutOfDomain("headline constants need a solution on [0, 5]")
    u1 = float(solution.u1(5.0))
    u2 = np.asarray(solution.u2(5.0))
    u3 = float(solution.u3(5.0))
    vector_sum = np.array([1.0, 0.0]) + rotation(1.0) @ u2
    shift = 1.0 + 2.0 * float(_FIRST_DISK_ROW @ u2) + u1 + 2.0 * u3
    return HeadlineResults(1.0 + u1, vector_sum, shift)


@dataclass(frozen=True)
class ComparisonRow:
    feature: str
    solver_value: float
    mc_mean: float
    mc_se: float

    @property
    def z_score(self) -> float:
        diff = self.solver_value - self.mc_mean
        if self.mc_se > 0:
            return diff / self.mc_se
        return 0.0 if abs(diff) <= 1e-12 else math.copysign(math.inf, diff)

    @property
    def flagged(self) -> bool:
        return abs(self.z_score) > Z_THRESHOLD

    def to_dict(self) -> dict:
        return {
            "feature": self.feature,
            "solver_value": self.solver_value,
            "mc_mean": self.mc_mean,
            "mc_se": self.mc_se,
            "z_score": self.z_score,
            "flagged": self.flagged,
        }


@dataclass
class ComparisonReport:
    x: float
    rows: list[ComparisonRow] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not any(row.flagged for row in self.rows)

    def to_dict(self) -> dict:
        return {"x": self.x, "z_threshold": Z_THRESHOLD, "ok": self.ok,
                "rows": [row.to_dict() for row in self.rows]}


def compare(solution: Solution, estimates: dict[str, McEstimate], x: float) -> ComparisonReport:
    """Line up solver values at ``x`` with Monte Carlo estimates taken at the same ``x``."""
    u1 = float(solution.u1(x))
    u2 = np.asarray(solution.u2(x))
    u3 = float(solution.u3(x))
    f = estimates["F"]
    rows = [
        ComparisonRow("K", u1, float(estimates["K"].mean), float(estimates["K"].std_error)),
        ComparisonRow("F_x", float(u2[0]), float(f.mean[0]), float(f.std_error[0])),
        ComparisonRow("F_y", float(u2[1]), float(f.mean[1]), float(f.std_error[1])),
        ComparisonRow("E2", u3, float(estimates["E2"].mean), float(estimates["E2"].std_error)),
        # L2 = K + 2 E2 sample by sample
        ComparisonRow("L2", u1 + 2.0 * u3, float(estimates["L2"].mean), float(estimates["L2"].std_error)),
    ]
    return ComparisonReport(float(x), rows)


def _fmt(value: float) -> str:
    return f"{value:.{SIG_DIGITS}g}"


def headline_text(results: HeadlineResults) -> str:
    vx, vy = results.expected_vector_sum
    lines = [
        ("expected_total_disks", _fmt(results.expected_total_disks)),
        ("expected_vector_sum", f"({_fmt(vx)}, {_fmt(vy)})"),
        ("mean_square_shift", _fmt(results.mean_square_shift)),
    ]
    width = max(len(name) for name, _ in lines)
    return "\n".join(f"{name:<{width}}  {value}" for name, value in lines)


def comparison_text(report: ComparisonReport) -> str:
    header = ("feature", "solver", "mc_mean", "mc_se", "z")
    body = [
        (row.feature, _fmt(row.solver_value), _fmt(row.mc_mean), f"{row.mc_se:.3e}",
         f"{row.z_score:+.3f}" + (" *" if row.flagged else ""))
        for row in report.rows
    ]
    widths = [max(len(r[i]) for r in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(r, widths)).rstrip() for r in [header, *body]]
    lines.append(f"x = {report.x:g}; |z| > {Z_THRESHOLD:g} flagged; {'OK' if report.ok else 'MISMATCH'}")
    return "\n".join(lines)
