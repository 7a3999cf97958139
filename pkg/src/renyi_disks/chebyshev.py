"""Chebyshev series on a single interval: fit, evaluate, antidifferentiate.

Functions passed to :func:`fit` and :func:`integrate` are called with a 1-d
array of points and must return an array of shape ``(n,)`` (scalar valued)
or ``(n, 2)`` (vector valued).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.fft import dct

from .exceptions import NonConvergence, OutOfDomain

DEFAULT_TOL = 1e-14
DEFAULT_MAX_DEGREE = 256
DEFAULT_QUAD_ORDER = 64
DOMAIN_SLACK = 1e-12
MIN_DEGREE = 4
# rounding noise of sampled values is a few ulps; check nodes cannot resolve below this
CHECK_FLOOR = 16 * np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class ChebyshevBlock:
    """Chebyshev series ``sum_k c_k T_k(s)`` with ``s`` the image of ``[a, b]`` on ``[-1, 1]``.

    ``coefficients`` has shape ``(n + 1,)`` for a scalar function and
    ``(n + 1, 2)`` for a 2-vector function (one column per component).
    """

    a: float
    b: float
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=float)
        if not self.a < self.b:
            raise ValueError(f"empty interval [{self.a}, {self.b}]")
        if coeffs.ndim not in (1, 2) or coeffs.shape[0] == 0:
            raise ValueError("coefficients must be a nonempty (n,) or (n, 2) array")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def degree(self) -> int:
        return self.coefficients.shape[0] - 1

    @property
    def is_vector(self) -> bool:
        return self.coefficients.ndim == 2

    @property
    def interval(self) -> tuple[float, float]:
        return (self.a, self.b)

    def __call__(self, x):
        return evaluate(self, x)

    def to_dict(self) -> dict:
        out = {"a": self.a, "b": self.b}
        if self.is_vector:
            out["coefficients_x"] = self.coefficients[:, 0].tolist()
            out["coefficients_y"] = self.coefficients[:, 1].tolist()
        else:
            out["coefficients"] = self.coefficients.tolist()
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ChebyshevBlock":
        if "coefficients" in data:
            coeffs = np.asarray(data["coefficients"], dtype=float)
        else:
            coeffs = np.column_stack([data["coefficients_x"], data["coefficients_y"]])
        return cls(float(data["a"]), float(data["b"]), coeffs)


def chebyshev_points(n: int, a: float = -1.0, b: float = 1.0) -> np.ndarray:
    """The ``n + 1`` Chebyshev extreme points on ``[a, b]``, from ``b`` down to ``a``."""
    s = np.cos(np.pi * np.arange(n + 1) / n)
    # symmetric rounding: keep the endpoints and the midpoint exact
    s[0], s[-1] = 1.0, -1.0
    if n % 2 == 0:
        s[n // 2] = 0.0
    return 0.5 * (a + b) + 0.5 * (b - a) * s


def values_to_coefficients(values: np.ndarray) -> np.ndarray:
    """Coefficients of the interpolant through values at :func:`chebyshev_points`."""
    values = np.asarray(values, dtype=float)
    n = values.shape[0] - 1
    if n == 0:
        return values.copy()
    coeffs = dct(values, type=1, axis=0) / n
    coeffs[0] *= 0.5
    coeffs[-1] *= 0.5
    return coeffs


def _clenshaw(coeffs: np.ndarray, s: np.ndarray) -> np.ndarray:
    if coeffs.ndim == 2:
        s = s[:, None]
    b1 = np.zeros(np.broadcast_shapes(s.shape, coeffs.shape[1:]))
    b2 = np.zeros_like(b1)
    two_s = 2.0 * s
    for c in coeffs[:0:-1]:
        b1, b2 = two_s * b1 - b2 + c, b1
    return s * b1 - b2 + coeffs[0]


def _alternating_tail(coeffs: np.ndarray) -> np.ndarray:
    signs = np.where(np.arange(1, coeffs.shape[0]) % 2 == 1, -1.0, 1.0)
    if coeffs.ndim == 2:
        signs = signs[:, None]
    return np.sum(signs * coeffs[1:], axis=0)


def evaluate(block: ChebyshevBlock, x):
    """Evaluate ``block`` at ``x`` (scalar or array) by Clenshaw's recurrence.

    The endpoints use the exact values ``T_k(+-1) = (+-1)**k``.
    """
    xs = np.asarray(x, dtype=float)
    scalar_input = xs.ndim == 0
    xs = np.atleast_1d(xs)
    a, b = block.a, block.b
    if np.any(xs < a - DOMAIN_SLACK) or np.any(xs > b + DOMAIN_SLACK):
        raise OutOfDomain(f"evaluation point outside [{a}, {b}]")
    s = np.clip((2.0 * xs - a - b) / (b - a), -1.0, 1.0)
    coeffs = block.coefficients
    out = _clenshaw(coeffs, s)
    at_left = xs <= a
    at_right = xs >= b
    if at_left.any():
        out[at_left] = coeffs[0] + _alternating_tail(coeffs)
    if at_right.any():
        out[at_right] = coeffs[0] + np.sum(coeffs[1:], axis=0)
    return out[0] if scalar_input else out


def antiderivative(block: ChebyshevBlock) -> ChebyshevBlock:
    """Block ``G`` on the same interval with ``G(a) = 0`` and ``G' = block``."""
    c = block.coefficients
    n = c.shape[0]
    padded = np.zeros((n + 2,) + c.shape[1:])
    padded[:n] = c
    padded[0] *= 2.0
    k = np.arange(1, n + 1, dtype=float)
    if c.ndim == 2:
        k = k[:, None]
    out = np.zeros((n + 1,) + c.shape[1:])
    out[1:] = (padded[:n] - padded[2 : n + 2]) / (2.0 * k)
    out[1:] *= 0.5 * (block.b - block.a)
    out[0] = -_alternating_tail(out)
    return ChebyshevBlock(block.a, block.b, out)


def definite_integral(block: ChebyshevBlock):
    """Integral of ``block`` over its whole interval."""
    return evaluate(antiderivative(block), block.b)


def fit(
    f,
    interval: tuple[float, float],
    tol: float = DEFAULT_TOL,
    max_degree: int = DEFAULT_MAX_DEGREE,
) -> ChebyshevBlock:
    """Adaptive Chebyshev interpolant of ``f`` on ``interval``.

    The degree doubles from 4 until the last two coefficients fall below
    ``tol * max(1, sup|f|)`` and the interpolant reproduces ``f`` to the same
    tolerance (never below ``CHECK_FLOOR``) at the midpoint nodes of the next
    finer grid. Samples are nested, so each refinement only evaluates ``f``
    at the new nodes.

    Raises NonConvergence if ``max_degree`` is reached first, which is what
    happens when ``f`` has a kink or jump inside the interval.
    """
    a, b = map(float, interval)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_degree < MIN_DEGREE:
        raise ValueError(f"max_degree must be at least {MIN_DEGREE}")

    n = MIN_DEGREE
    values = np.asarray(f(chebyshev_points(n, a, b)), dtype=float)
    while True:
        coeffs = values_to_coefficients(values)
        # the odd-indexed nodes of the 2n grid double as check nodes
        fine = chebyshev_points(2 * n, a, b)
        new_values = np.asarray(f(fine[1::2]), dtype=float)
        scale = max(1.0, float(np.max(np.abs(values))), float(np.max(np.abs(new_values))))
        threshold = tol * scale
        if np.max(np.abs(coeffs[-2:])) <= threshold:
            block = ChebyshevBlock(a, b, coeffs)
            check = max(tol, CHECK_FLOOR) * scale
            if np.max(np.abs(evaluate(block, fine[1::2]) - new_values)) <= check:
                return block
        if 2 * n > max_degree:
            raise NonConvergence(
                f"no tail decay below {tol:g} on [{a}, {b}] up to degree {n}"
            )
        merged = np.empty((2 * n + 1,) + values.shape[1:])
        merged[0::2] = values
        merged[1::2] = new_values
        values = merged
        n *= 2


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def integrate(f, a: float, b: float, order: int = DEFAULT_QUAD_ORDER):
    """Gauss-Legendre approximation of the integral of ``f`` over ``[a, b]``.

    Exact for polynomials of degree up to ``2 * order - 1``.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    if b < a:
        raise ValueError("integrate requires a <= b")
    if a == b:
        probe = np.asarray(f(np.array([a], dtype=float)), dtype=float)
        return np.zeros(probe.shape[1:]) if probe.ndim > 1 else 0.0
    nodes, weights = gauss_legendre(order)
    half = 0.5 * (b - a)
    values = np.asarray(f(0.5 * (a + b) + half * nodes), dtype=float)
    return half * np.tensordot(weights, values, axes=(0, 0))
