"""Command line interface.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 statistical mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

from . import report, simulator
from .exceptions import NonConvergence
from .solver import X_MAX_LIMIT, SolverConfig, solve_all

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_MISMATCH = 0, 1, 2, 3
GRID_COLUMNS = ("x", "u1", "u2_x", "u2_y", "u3")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump_json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _grid_csv(grid: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(GRID_COLUMNS)
    for row in zip(*(grid[c] for c in GRID_COLUMNS)):
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def _grid_json(grid: dict) -> str:
    return _dump_json({c: [float(v) for v in grid[c]] for c in GRID_COLUMNS})


def _config(x_max: float, tol: float = SolverConfig.fit_tol) -> SolverConfig:
    if not 1.0 <= x_max <= X_MAX_LIMIT:
        raise UsageError(f"xmax must lie in [1, {X_MAX_LIMIT:g}], got {x_max:g}")
    if tol <= 0:
        raise UsageError("tol must be positive")
    return SolverConfig(x_max=x_max, fit_tol=tol)


def _check_samples(args) -> None:
    if args.samples < 1:
        raise UsageError("samples must be at least 1")
    if args.workers < 1:
        raise UsageError("workers must be at least 1")


def cmd_solve(args) -> int:
    solution = solve_all(_config(args.xmax, args.tol))
    if args.format == "csv":
        _emit(_grid_csv(solution.grid(args.points)), args.out)
    else:
        _emit(_dump_json(solution.to_dict()), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    _check_samples(args)
    estimates = simulator.estimate(args.x, args.samples, args.seed, args.workers)
    _emit(_dump_json(simulator.estimate_to_dict(args.x, estimates)), args.out)
    return EXIT_OK


def cmd_compare(args) -> int:
    _check_samples(args)
    solution = solve_all(_config(max(5.0, min(args.x, X_MAX_LIMIT))), check_residuals=False)
    if not 0 <= args.x <= solution.x_max:
        raise UsageError(f"x must lie in [0, {X_MAX_LIMIT:g}]")
    estimates = simulator.estimate(args.x, args.samples, args.seed, args.workers)
    result = report.compare(solution, estimates, args.x)
    if args.format == "json":
        _emit(_dump_json(result.to_dict()), args.out)
    else:
        _emit(report.comparison_text(result) + "\n", args.out)
    return EXIT_OK if result.ok else EXIT_MISMATCH


def cmd_report(args) -> int:
    results = report.headline(solve_all(_config(5.0), check_residuals=False))
    if args.format == "json":
        _emit(_dump_json(results.to_dict()), args.out)
    else:
        _emit(report.headline_text(results) + "\n", args.out)
    return EXIT_OK


def cmd_eval(args) -> int:
    if not 0 <= args.at <= X_MAX_LIMIT:
        raise UsageError(f"--at must lie in [0, {X_MAX_LIMIT:g}]")
    solution = solve_all(_config(max(5.0, args.at)), check_residuals=False)
    value = solution.function(args.quantity)(args.at)
    if args.quantity == "u2":
        print(f"{float(value[0])!r} {float(value[1])!r}")
    else:
        print(repr(float(value)))
    return EXIT_OK


def cmd_grid(args) -> int:
    if args.points < 2:
        raise UsageError("points must be at least 2")
    grid = solve_all(_config(args.xmax), check_residuals=False).grid(args.points)
    _emit(_grid_csv(grid) if args.format == "csv" else _grid_json(grid), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="renyi-disks", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve the three integral equations")
    p.add_argument("--xmax", type=float, default=5.0)
    p.add_argument("--tol", type=float, default=SolverConfig.fit_tol)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--points", type=int, default=500, help="grid points for csv output")
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    def mc_flags(p):
        p.add_argument("--x", type=float, default=5.0)
        p.add_argument("--samples", type=int, default=1_000_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out")

    p = sub.add_parser("simulate", help="Monte Carlo estimates of K, F, E2, L2")
    mc_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="solver values against Monte Carlo estimates")
    mc_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("report", help="print the three headline constants")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("eval", help="evaluate one solved function at a point")
    p.add_argument("--quantity", choices=("u1", "u2", "u3"), required=True)
    p.add_argument("--at", type=float, required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("grid", help="write the solved functions on a uniform grid")
    p.add_argument("--points", type=int, default=500)
    p.add_argument("--xmax", type=float, default=5.0)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_grid)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"renyi-disks: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonConvergence as exc:
        print(f"renyi-disks: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
