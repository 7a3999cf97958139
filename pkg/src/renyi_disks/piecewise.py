"""Functions on ``[0, x_max]`` that vanish on ``[0, 1)`` and are smooth on unit blocks."""

from __future__ import annotations

import json
import math

import numpy as np

from . import chebyshev
from .chebyshev import ChebyshevBlock
from .exceptions import OutOfDomain

SCALAR = "scalar"
VECTOR = "vector"


class PiecewiseFunction:
    """Chebyshev blocks on ``[1, 2], [2, 3], ...`` preceded by a zero prefix on ``[0, 1)``.

    Blocks are appended in order and never modified afterwards, which is what
    lets the antiderivative and weighted-product caches stay valid while a
    solver extends the function block by block. Interior knots belong to the
    block on their right; the last knot belongs to the last block.
    """

    def __init__(self, value_kind: str, x_max: float, blocks=(), fit_tol=chebyshev.DEFAULT_TOL,
                 max_degree=chebyshev.DEFAULT_MAX_DEGREE):
        if value_kind not in (SCALAR, VECTOR):
            raise ValueError(f"value_kind must be {SCALAR!r} or {VECTOR!r}")
        if x_max < 1:
            raise ValueError("x_max must be at least 1")
        self.value_kind = value_kind
        self.x_max = float(x_max)
        self.fit_tol = fit_tol
        self.max_degree = max_degree
        self.blocks: list[ChebyshevBlock] = []
        self._antiderivatives: list[ChebyshevBlock] = []
        self._prefix: list = [self._zero()]
        self._weighted: dict = {}
        for block in blocks:
            self.append(block)

    @property
    def n_blocks_needed(self) -> int:
        return math.ceil(self.x_max) - 1

    @property
    def complete(self) -> bool:
        return len(self.blocks) >= self.n_blocks_needed

    @property
    def known_end(self) -> float:
        """Right end of the part of the domain currently covered."""
        return min(self.x_max, 1.0 + len(self.blocks))

    def _zero(self):
        return np.zeros(2) if self.value_kind == VECTOR else 0.0

    def append(self, block: ChebyshevBlock) -> None:
        k = len(self.blocks) + 1
        if (block.a, block.b) != (float(k), float(k + 1)):
            raise ValueError(f"expected a block on [{k}, {k + 1}], got [{block.a}, {block.b}]")
        if block.is_vector != (self.value_kind == VECTOR):
            raise ValueError("block value kind does not match the function")
        if self.complete:
            raise ValueError("function already covers [0, x_max]")
        anti = chebyshev.antiderivative(block)
        self.blocks.append(block)
        self._antiderivatives.append(anti)
        self._prefix.append(self._prefix[-1] + chebyshev.evaluate(anti, block.b))

    def _check(self, x: np.ndarray) -> None:
        if np.any(x < 0) or np.any(x > self.known_end):
            raise OutOfDomain(f"points outside [0, {self.known_end}]")

    def _block_index(self, x: np.ndarray) -> np.ndarray:
        return np.clip(np.floor(x).astype(int) - 1, 0, len(self.blocks) - 1)

    def _piecewise(self, x, per_block, zero_below):
        xs = np.asarray(x, dtype=float)
        scalar_input = xs.ndim == 0
        xs = np.atleast_1d(xs)
        self._check(xs)
        shape = xs.shape + ((2,) if self.value_kind == VECTOR else ())
        out = np.zeros(shape)
        live = xs >= zero_below
        if live.any() and self.blocks:
            idx = self._block_index(xs)
            for k in np.unique(idx[live]):
                mask = live & (idx == k)
                out[mask] = per_block(k, xs[mask])
        return out[0] if scalar_input else out

    def value_at(self, x):
        """Value at ``x`` (scalar or array); zero on ``[0, 1)``."""
        return self._piecewise(x, lambda k, xs: chebyshev.evaluate(self.blocks[k], xs), 1.0)

    __call__ = value_at

    def cumulative_integral(self, t):
        """Integral of the function over ``[0, t]``, exact for the stored polynomials."""
        return self._piecewise(
            t,
            lambda k, ts: self._prefix[k] + chebyshev.evaluate(self._antiderivatives[k], ts),
            1.0,
        )

    def _weighted_block(self, k: int, weight, key):
        cache_key = (k, key)
        if cache_key not in self._weighted:
            block = self.blocks[k]
            if self.value_kind == VECTOR:
                def product(y):
                    return np.asarray(weight(y))[:, None] * chebyshev.evaluate(block, y)
            else:
                def product(y):
                    return np.asarray(weight(y)) * chebyshev.evaluate(block, y)
            fitted = chebyshev.fit(product, (block.a, block.b), self.fit_tol, self.max_degree)
            anti = chebyshev.antiderivative(fitted)
            previous = self._weighted[(k - 1, key)][1] if k > 0 else self._zero()
            self._weighted[cache_key] = (anti, previous + chebyshev.evaluate(anti, block.b))
        return self._weighted[cache_key]

    def weighted_cumulative_integral(self, weight, t, key=None):
        """Integral of ``weight(y) * u(y)`` over ``[0, t]``.

        ``weight`` must accept an array. The fitted product on each block is
        cached under ``key`` (default: the weight object itself), so pass a
        stable key when the weight is a fresh lambda on every call.
        """
        key = weight if key is None else key
        for k in range(len(self.blocks)):
            self._weighted_block(k, weight, key)

        def per_block(k, ts):
            anti = self._weighted[(k, key)][0]
            before = self._weighted[(k - 1, key)][1] if k > 0 else self._zero()
            return before + chebyshev.evaluate(anti, ts)

        return self._piecewise(t, per_block, 1.0)

    def knot_jumps(self) -> list[float]:
        """``|u(k-) - u(k+)|`` at the interior knots ``k = 2, 3, ...``."""
        jumps = []
        for left, right in zip(self.blocks, self.blocks[1:]):
            diff = chebyshev.evaluate(left, left.b) - chebyshev.evaluate(right, right.a)
            jumps.append(float(np.max(np.abs(diff))))
        return jumps

    def to_dict(self) -> dict:
        return {
            "value_kind": self.value_kind,
            "x_max": self.x_max,
            "blocks": [block.to_dict() for block in self.blocks],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PiecewiseFunction":
        blocks = [ChebyshevBlock.from_dict(b) for b in data["blocks"]]
        return cls(data["value_kind"], data["x_max"], blocks)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_json(cls, text: str) -> "PiecewiseFunction":
        return cls.from_dict(json.loads(text))

    def __repr__(self):
        degrees = [b.degree for b in self.blocks]
        return f"PiecewiseFunction({self.value_kind!r}, x_max={self.x_max}, degrees={degrees})"
