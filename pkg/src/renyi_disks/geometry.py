"""Circle-map primitives.

Positions on the parking line are measured in interval units: one unit of
length corresponds to a rotation by pi/3 on the unit circle, so six unit
disks fit exactly around the central one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OMEGA = np.pi / 3.0


@dataclass(frozen=True)
class Vec2:
    x: float
    y: float

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x, self.y], dtype=dtype)

    def __iter__(self):
        yield self.x
        yield self.y


@dataclass(frozen=True)
class Rot2:
    """Rotation by ``pi * t / 3``, stored by its angle parameter ``t``.

    The matrix is only built on demand, so composing rotations adds the
    parameters exactly instead of multiplying rounded matrices.
    """

    t: float

    @property
    def matrix(self) -> np.ndarray:
        c, s = np.cos(OMEGA * self.t), np.sin(OMEGA * self.t)
        return np.array([[c, -s], [s, c]])

    def __matmul__(self, other):
        if isinstance(other, Rot2):
            return Rot2(self.t + other.t)
        return self.matrix @ np.asarray(other, dtype=float)

    def inverse(self) -> "Rot2":
        return Rot2(-self.t)


def rotation(t: float) -> Rot2:
    """Counterclockwise rotation by ``pi * t / 3``."""
    return Rot2(float(t))


def rotation_matrix(t) -> np.ndarray:
    """Stacked rotation matrices for an array of parameters, shape ``(..., 2, 2)``."""
    t = np.asarray(t, dtype=float)
    c, s = np.cos(OMEGA * t), np.sin(OMEGA * t)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def circle_point(y: float) -> Vec2:
    """Point ``Q(y) (1, 0)`` on the unit circle."""
    return Vec2(float(np.cos(OMEGA * y)), float(np.sin(OMEGA * y)))


def circle_points(y) -> np.ndarray:
    """Vectorised :func:`circle_point`, returning an array of shape ``(..., 2)``."""
    y = np.asarray(y, dtype=float)
    return np.stack([np.cos(OMEGA * y), np.sin(OMEGA * y)], -1)


def circle_point_integral(t) -> np.ndarray:
    """Closed form of the integral of ``circle_point`` over ``[0, t]``.

    Uses ``1 - cos(a) = 2 sin(a/2)**2`` so the second component keeps full
    relative accuracy for small ``t``.
    """
    t = np.asarray(t, dtype=float)
    half = np.sin(0.5 * OMEGA * t)
    return np.stack([np.sin(OMEGA * t), 2.0 * half * half], -1) / OMEGA
