"""Block substitution for the expected count, vector sum and pair-cosine sum.

All three expectations solve ``u(x) = 1/(x-1) int_0^{x-1} M(x, y) u(y) dy + g(x)``
with ``u = 0`` on ``[0, 1)``. On ``[k, k+1]`` the right-hand side only reads
``u`` on ``[0, k]``, so each unit block is obtained by sampling the
right-hand side at Chebyshev points and fitting; no linear system is solved.

    u1(x) = 2/(x-1) int_0^{x-1} u1 + 1                      (expected count)
    u2(x) = 1/(x-1) int_0^{x-1} (I + Q(x-y)) u2(y) + v(y)    (expected vector sum)
    u3(x) = 2/(x-1) int_0^{x-1} u3 + g3(x)                  (expected pair-cosine sum)
"""

from __future__ import annotations

import logging
from dataclasses import asdict, dataclass, field

import numpy as np

from . import chebyshev
from .exceptions import OutOfDomain
from .geometry import OMEGA, circle_point_integral, circle_points
from .piecewise import SCALAR, VECTOR, PiecewiseFunction

log = logging.getLogger(__name__)

X_MAX_LIMIT = 6.0
RESIDUAL_ORDER = 128
RESIDUAL_POINTS_PER_BLOCK = 25

# v(-1) as a row vector, from v(y)^T Q(y+1) = v(-1)^T
_V_MINUS_ONE = np.array([np.cos(OMEGA), -np.sin(OMEGA)])


def _cos_weight(y):
    return np.cos(OMEGA * y)


def _sin_weight(y):
    return np.sin(OMEGA * y)


@dataclass(frozen=True)
class SolverConfig:
    x_max: float = 5.0
    fit_tol: float = chebyshev.DEFAULT_TOL
    max_degree: int = chebyshev.DEFAULT_MAX_DEGREE
    quad_order: int = chebyshev.DEFAULT_QUAD_ORDER

    def __post_init__(self):
        if not 1.0 <= self.x_max <= X_MAX_LIMIT:
            raise ValueError(f"x_max must lie in [1, {X_MAX_LIMIT:g}], got {self.x_max}")
        if not self.fit_tol > 0:
            raise ValueError("fit_tol must be positive")
        if self.max_degree < chebyshev.MIN_DEGREE:
            raise ValueError(f"max_degree must be at least {chebyshev.MIN_DEGREE}")
        if self.quad_order < 2:
            raise ValueError("quad_order must be at least 2")


def _new_function(kind: str, config: SolverConfig) -> PiecewiseFunction:
    return PiecewiseFunction(kind, config.x_max, fit_tol=config.fit_tol, max_degree=config.max_degree)


def _extend(u: PiecewiseFunction, rhs, config: SolverConfig) -> PiecewiseFunction:
    for k in range(1, u.n_blocks_needed + 1):
        block = chebyshev.fit(rhs, (float(k), float(k + 1)), config.fit_tol, config.max_degree)
        log.debug("block [%d, %d]: degree %d", k, k + 1, block.degree)
        u.append(block)
    return u


def _safe_length(x):
    t = np.asarray(x, dtype=float) - 1.0
    return t, np.where(t > 0, t, 1.0)


def solve_u1(config: SolverConfig = SolverConfig()) -> PiecewiseFunction:
    """Expected number of cars parked in ``[0, x]``."""
    u = _new_function(SCALAR, config)

    def rhs(x):
        t, safe = _safe_length(x)
        return np.where(t > 0, 2.0 * u.cumulative_integral(t) / safe + 1.0, 1.0)

    return _extend(u, rhs, config)


def _rotated_weighted_integral(u2: PiecewiseFunction, t) -> np.ndarray:
    """``int_0^t Q(-y) u2(y) dy`` from the cosine- and sine-weighted integrals."""
    wc = u2.weighted_cumulative_integral(_cos_weight, t, key="cos")
    ws = u2.weighted_cumulative_integral(_sin_weight, t, key="sin")
    return np.stack([wc[..., 0] + ws[..., 1], wc[..., 1] - ws[..., 0]], -1)


def solve_u2(config: SolverConfig = SolverConfig()) -> PiecewiseFunction:
    """Expected vector sum of the mapped car positions in ``[0, x]``."""
    u = _new_function(VECTOR, config)

    def rhs(x):
        x = np.asarray(x, dtype=float)
        t, safe = _safe_length(x)
        r = _rotated_weighted_integral(u, t)
        c, s = np.cos(OMEGA * x), np.sin(OMEGA * x)
        # Q(x - y) = Q(x) Q(-y)
        rotated = np.stack([c * r[:, 0] - s * r[:, 1], s * r[:, 0] + c * r[:, 1]], -1)
        total = u.cumulative_integral(t) + rotated + circle_point_integral(t)
        out = total / safe[:, None]
        out[t <= 0] = (1.0, 0.0)
        return out

    return _extend(u, rhs, config)


def _convolution_pieces(t: float) -> np.ndarray:
    """Breakpoints of ``y -> u2(y)^T Q(y+1) u2(t-y)`` on its support ``[1, t-1]``."""
    lo, hi = 1.0, t - 1.0
    inner = np.arange(2, int(np.ceil(hi)))
    points = np.concatenate([[lo, hi], inner, t - inner])
    points = np.unique(points[(points >= lo) & (points <= hi)])
    return points


def _convolution_term(u2: PiecewiseFunction, t: np.ndarray, order: int) -> np.ndarray:
    """``int_0^t u2(y)^T Q(y+1) u2(t-y) dy`` for each entry of ``t``, by split quadrature."""
    nodes, weights = chebyshev.gauss_legendre(order)
    ys, ws, owner = [], [], []
    for i, ti in enumerate(t):
        if ti <= 2.0:
            continue
        edges = _convolution_pieces(ti)
        for a, b in zip(edges[:-1], edges[1:]):
            if b <= a:
                continue
            half = 0.5 * (b - a)
            ys.append(0.5 * (a + b) + half * nodes)
            ws.append(half * weights)
            owner.append(np.full(order, i))
    out = np.zeros(len(t))
    if not ys:
        return out
    y = np.concatenate(ys)
    w = np.concatenate(ws)
    owner = np.concatenate(owner)
    left = u2.value_at(y)
    right = u2.value_at(t[owner] - y)
    c, s = np.cos(OMEGA * (y + 1.0)), np.sin(OMEGA * (y + 1.0))
    qr0 = c * right[:, 0] - s * right[:, 1]
    qr1 = s * right[:, 0] + c * right[:, 1]
    integrand = left[:, 0] * qr0 + left[:, 1] * qr1
    return np.bincount(owner, weights=w * integrand, minlength=len(t))


def g3_at(x, u2: PiecewiseFunction, config: SolverConfig = SolverConfig()):
    """Inhomogeneous term of the pair-cosine equation at ``x`` (scalar or array).

    Needs ``u2`` on ``[0, x - 1]``; its value at ``x = 1`` is the limit 0.
    """
    xs = np.asarray(x, dtype=float)
    scalar_input = xs.ndim == 0
    xs = np.atleast_1d(xs)
    if np.any(xs < 1.0):
        raise OutOfDomain("g3 is defined for x >= 1")
    t, safe = _safe_length(xs)
    if np.any(t > u2.known_end):
        raise OutOfDomain(f"u2 is only known on [0, {u2.known_end}]")
    r = _rotated_weighted_integral(u2, t)
    c = u2.cumulative_integral(t)
    # int v(y)^T u2(y) dy is the first component of int Q(-y) u2(y) dy
    linear = r[:, 0] + c @ _V_MINUS_ONE
    out = (linear + _convolution_term(u2, t, config.quad_order)) / safe
    out = np.where(t > 0, out, 0.0)
    return out[0] if scalar_input else out


def solve_u3(config: SolverConfig = SolverConfig(), u2: PiecewiseFunction | None = None) -> PiecewiseFunction:
    """Expected sum of ``cos(pi (Y_i - Y_j) / 3)`` over pairs of cars in ``[0, x]``."""
    if u2 is None:
        u2 = solve_u2(config)
    if u2.known_end < config.x_max - 1.0:
        raise OutOfDomain("u2 must be solved on [0, x_max - 1]")
    u = _new_function(SCALAR, config)

    def rhs(x):
        t, safe = _safe_length(x)
        homogeneous = np.where(t > 0, 2.0 * u.cumulative_integral(t) / safe, 0.0)
        return homogeneous + g3_at(x, u2, config)

    return _extend(u, rhs, config)


@dataclass
class Solution:
    u1: PiecewiseFunction
    u2: PiecewiseFunction
    u3: PiecewiseFunction
    config: SolverConfig
    residuals: dict = field(default_factory=dict)

    @property
    def x_max(self) -> float:
        return self.config.x_max

    def function(self, quantity: str) -> PiecewiseFunction:
        try:
            return {"u1": self.u1, "u2": self.u2, "u3": self.u3}[quantity]
        except KeyError:
            raise ValueError(f"unknown quantity {quantity!r}") from None

    def grid(self, points: int = 500) -> dict[str, np.ndarray]:
        """Uniform grid over ``[0, x_max]`` with both endpoints."""
        x = np.linspace(0.0, self.x_max, points)
        u2 = self.u2(x)
        return {"x": x, "u1": self.u1(x), "u2_x": u2[:, 0], "u2_y": u2[:, 1], "u3": self.u3(x)}

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "u1": self.u1.to_dict(),
            "u2": self.u2.to_dict(),
            "u3": self.u3.to_dict(),
            "residuals": dict(self.residuals),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Solution":
        return cls(
            u1=PiecewiseFunction.from_dict(data["u1"]),
            u2=PiecewiseFunction.from_dict(data["u2"]),
            u3=PiecewiseFunction.from_dict(data["u3"]),
            config=SolverConfig(**data["config"]),
            residuals=dict(data.get("residuals", {})),
        )


def solve_all(config: SolverConfig = SolverConfig(), check_residuals: bool = True) -> Solution:
    """Solve all three equations in dependency order."""
    u1 = solve_u1(config)
    u2 = solve_u2(config)
    u3 = solve_u3(config, u2)
    solution = Solution(u1, u2, u3, config)
    if check_residuals:
        solution.residuals = residuals(solution)
    return solution


# Independent residual check: direct Gauss-Legendre quadrature of the right-hand
# sides from point values, bypassing the cached antiderivatives.

def _split_quadrature(integrand, edges, order: int):
    nodes, weights = chebyshev.gauss_legendre(order)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        if b > a:
            half = 0.5 * (b - a)
            y = 0.5 * (a + b) + half * nodes
            total = total + half * np.tensordot(weights, integrand(y), axes=(0, 0))
    return total


def _unit_edges(t: float, extra=()) -> np.ndarray:
    points = np.concatenate([[0.0, t], np.arange(1, int(np.ceil(t))), list(extra)])
    return np.unique(points[(points >= 0) & (points <= t)])


def rhs_u1_direct(u1: PiecewiseFunction, x: float, order: int = RESIDUAL_ORDER) -> float:
    t = x - 1.0
    if t <= 0:
        return 1.0
    return 2.0 / t * _split_quadrature(u1.value_at, _unit_edges(t), order) + 1.0


def rhs_u2_direct(u2: PiecewiseFunction, x: float, order: int = RESIDUAL_ORDER) -> np.ndarray:
    t = x - 1.0
    if t <= 0:
        return np.array([1.0, 0.0])

    def integrand(y):
        u = u2.value_at(y)
        c, s = np.cos(OMEGA * (x - y)), np.sin(OMEGA * (x - y))
        qu = np.stack([c * u[:, 0] - s * u[:, 1], s * u[:, 0] + c * u[:, 1]], -1)
        return u + qu + circle_points(y)

    return _split_quadrature(integrand, _unit_edges(t), order) / t


def g3_direct(u2: PiecewiseFunction, x: float, order: int = RESIDUAL_ORDER) -> float:
    t = x - 1.0
    if t <= 0:
        return 0.0

    def integrand(y):
        left = u2.value_at(y)
        right = u2.value_at(t - y)
        c, s = np.cos(OMEGA * (y + 1.0)), np.sin(OMEGA * (y + 1.0))
        conv = left[:, 0] * (c * right[:, 0] - s * right[:, 1]) + left[:, 1] * (
            s * right[:, 0] + c * right[:, 1]
        )
        linear = np.sum((circle_points(y) + _V_MINUS_ONE) * left, axis=1)
        return conv + linear

    shifted = t - np.arange(0, int(np.ceil(t)) + 1)
    return _split_quadrature(integrand, _unit_edges(t, shifted), order) / t


def rhs_u3_direct(u3: PiecewiseFunction, u2: PiecewiseFunction, x: float,
                  order: int = RESIDUAL_ORDER) -> float:
    t = x - 1.0
    if t <= 0:
        return 0.0
    return 2.0 / t * _split_quadrature(u3.value_at, _unit_edges(t), order) + g3_direct(u2, x, order)


def residuals(solution: Solution, points_per_block: int = RESIDUAL_POINTS_PER_BLOCK,
              order: int = RESIDUAL_ORDER, seed: int = 0) -> dict[str, float]:
    """Max ``|u(x) - rhs(x)|`` per equation at random points in each unit block."""
    rng = np.random.default_rng(seed)
    x_max = solution.x_max
    xs = []
    for k in range(1, int(np.ceil(x_max))):
        xs.append(rng.uniform(k, min(k + 1.0, x_max), points_per_block))
    xs = np.concatenate(xs) if xs else np.empty(0)
    worst = {"u1": 0.0, "u2": 0.0, "u3": 0.0}
    for x in xs:
        worst["u1"] = max(worst["u1"], abs(float(solution.u1(x)) - rhs_u1_direct(solution.u1, x, order)))
        worst["u2"] = max(worst["u2"], float(np.max(np.abs(solution.u2(x) - rhs_u2_direct(solution.u2, x, order)))))
        worst["u3"] = max(
            worst["u3"], abs(float(solution.u3(x)) - rhs_u3_direct(solution.u3, solution.u2, x, order))
        )
    return {name: float(value) for name, value in worst.items()}
