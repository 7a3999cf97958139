"""Independent reference solutions used by the tests.

u1 is built symbolically block by block with sympy. u2 and u3 on [0, 3]
use closed forms in the sine and cosine integrals: with omega = pi/3 and
s = y - 1, u2 on [1, 2] is (e^{i omega s} - 1) / (i omega s) in complex
notation, and every integral needed on [2, 3] reduces to
int_0^a (e^{+-i omega s} - 1) / s ds.
"""

from __future__ import annotations

from functools import lru_cache

import mpmath
import numpy as np
import sympy as sp
from scipy.special import sici

OMEGA = np.pi / 3


@lru_cache(maxsize=None)
def u1_pieces(n_blocks: int = 3):
    """Sympy expressions for u1 on [1, 2), [2, 3), ..., one per block."""
    x, y = sp.symbols("x y", positive=True)
    pieces = []
    areas = []
    for k in range(1, n_blocks + 1):
        # integral of u1 over [0, x - 1] with x - 1 in [k - 1, k)
        t = x - 1
        acc = sum(areas[: max(k - 2, 0)], sp.Integer(0))
        if k >= 2:
            acc += sp.integrate(pieces[k - 2].subs(x, y), (y, k - 1, t))
        expr = sp.simplify(1 + sp.Rational(2) * acc / t) if k >= 2 else sp.Integer(1)
        pieces.append(expr)
        if k < n_blocks:
            areas.append(sp.integrate(expr.subs(x, y), (y, k, k + 1)))
    return x, pieces, areas


def u1_exact(xs, n_blocks: int = 3) -> np.ndarray:
    """Analytic u1 on [0, n_blocks + 1]; the right end uses the last piece."""
    x, pieces, _ = u1_pieces(n_blocks)
    funcs = [sp.lambdify(x, p, "mpmath") for p in pieces]
    out = []
    for xv in np.atleast_1d(xs):
        if xv < 1:
            out.append(0.0)
        else:
            k = min(int(np.floor(xv)), n_blocks)
            out.append(float(funcs[k - 1](sp.Float(xv, 40))))
    return np.array(out)


def u1_at_five() -> float:
    """u1(5) from the symbolic pieces on [1, 4), the last area by mpmath quadrature."""
    x, pieces, areas = u1_pieces(3)
    mpmath.mp.dps = 30
    last = sp.lambdify(x, pieces[2], "mpmath")
    total = sum(mpmath.mpf(sp.N(a, 30)) for a in areas) + mpmath.quad(last, [3, 4])
    return float(1 + 2 * total / 4)


def _cin(z):
    """int_0^z (1 - cos t) / t dt."""
    z = np.asarray(z, dtype=float)
    small = z < 1e-3
    safe = np.where(small, 1.0, z)
    si, ci = sici(safe)
    series = z**2 / 4 - z**4 / 96
    return np.where(small, series, np.euler_gamma + np.log(safe) - ci)


def _a_b(a):
    """A = int_0^a (e^{i w s} - 1)/s ds and B = int_0^a (1 - e^{-i w s})/s ds."""
    z = OMEGA * np.asarray(a, dtype=float)
    si = sici(np.where(z > 0, z, 1.0))[0]
    si = np.where(z > 0, si, 0.0)
    cin = _cin(z)
    return -cin + 1j * si, cin + 1j * si


def _u2_first_block(t):
    t = np.asarray(t, dtype=float)
    safe = np.where(t > 0, t, 1.0)
    z = (np.exp(1j * OMEGA * t) - 1) / (1j * OMEGA * safe)
    return np.where(t > 0, z, 1.0 + 0j)


def u2_exact(xs) -> np.ndarray:
    """u2 on [0, 3] as an array of shape (n, 2)."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs > 3) or np.any(xs < 0):
        raise ValueError("closed form only covers [0, 3]")
    z = np.zeros(len(xs), dtype=complex)
    first = (xs >= 1) & (xs < 2)
    z[first] = _u2_first_block(xs[first] - 1)
    second = xs >= 2
    if second.any():
        t = xs[second] - 1
        a = t - 1
        big_a, big_b = _a_b(a)
        total = (big_a + np.exp(1j * OMEGA * t) * big_b) / (1j * OMEGA) + (
            np.exp(1j * OMEGA * t) - 1
        ) / (1j * OMEGA)
        z[second] = total / t
    return np.column_stack([z.real, z.imag])


def u3_exact(xs) -> np.ndarray:
    """u3 on [0, 3]; zero below 2, g3 alone on [2, 3]."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if np.any(xs > 3) or np.any(xs < 0):
        raise ValueError("closed form only covers [0, 3]")
    out = np.zeros(len(xs))
    second = xs >= 2
    if second.any():
        t = xs[second] - 1
        big_a, big_b = _a_b(t - 1)
        val = (np.exp(-1j * OMEGA) * big_b + np.exp(1j * OMEGA) * big_a) / (1j * OMEGA)
        out[second] = val.real / t
    return out
