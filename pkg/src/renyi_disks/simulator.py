"""Monte Carlo simulation of the parking process and the disk features.

Each car consumes one uniform draw. The draw is scaled by the total measure
of feasible left endpoints, which picks the gap and the position inside it
in one step. Sample ``i`` of a run with seed ``s`` reads its draws from a
fixed block of the Philox counter space keyed by ``s``. The draws therefore
depend only on ``(s, i)``, and an estimate is the same for any chunking or
worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import OMEGA, circle_points

CHUNK_SIZE = 1 << 16
FEATURES = ("K", "F", "E2", "L2")


@dataclass(frozen=True)
class RenyiSample:
    x: float
    positions: np.ndarray
    start: float = 0.0

    @property
    def count(self) -> int:
        return len(self.positions)


@dataclass(frozen=True)
class FeatureSet:
    K: int
    F: np.ndarray
    E2: float
    L2: float


@dataclass(frozen=True)
class McEstimate:
    mean: float | np.ndarray
    std_error: float | np.ndarray
    n_samples: int
    seed: int

    def to_dict(self) -> dict:
        return {"mean": _jsonable(self.mean), "se": _jsonable(self.std_error)}


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return [float(v) for v in value]
    return float(value)


def max_cars(x: float) -> int:
    """Largest possible count: positions in ``[0, x-1]`` at least 1 apart."""
    return int(math.floor(x)) if x >= 1 else 0


def draws_per_sample(x: float) -> int:
    """Uniforms reserved per sample, a multiple of Philox's 4-word block."""
    return 4 * max(1, math.ceil(max_cars(x) / 4))


def sample_stream(seed: int, index: int, x: float) -> np.random.Generator:
    """Generator positioned at the draws reserved for sample ``index``."""
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(index * draws_per_sample(x) // 4)
    return np.random.Generator(bitgen)


def sample_renyi(x: float, rng: np.random.Generator, start: float = 0.0) -> RenyiSample:
    """One jammed configuration of unit cars on ``[start, start + x]``.

    Works on positions relative to ``start`` and only shifts at the end, so a
    shifted domain with the same stream gives exactly shifted positions.
    Gaps that admit a car at exactly one point have zero measure and are
    dropped.
    """
    if x < 1:
        return RenyiSample(float(x), np.empty(0), start)
    gap_starts = [0.0]
    gap_lengths = [float(x)]
    placed = []
    for _ in range(max_cars(x)):
        measures = [length - 1.0 if length - 1.0 > 0 else 0.0 for length in gap_lengths]
        cumulative = np.cumsum(measures)
        total = cumulative[-1]
        if total <= 0:
            break
        target = rng.random() * total
        j = _select(cumulative, measures, target)
        before = cumulative[j - 1] if j > 0 else 0.0
        offset = min(max(target - before, 0.0), measures[j])
        y = gap_starts[j] + offset
        placed.append(y)
        gap_starts.append(y + 1.0)
        gap_lengths.append(measures[j] - offset)
        gap_lengths[j] = offset
    positions = start + np.sort(np.array(placed))
    return RenyiSample(float(x), positions, start)


def _select(cumulative, measures, target) -> int:
    j = int(np.sum(cumulative <= target))
    if j >= len(measures):
        j = max(i for i, m in enumerate(measures) if m > 0)
    return j


def features(sample: RenyiSample) -> FeatureSet:
    """Count, vector sum, pair-cosine sum and squared norm of the mapped positions."""
    y = np.asarray(sample.positions, dtype=float)
    vectors = circle_points(y).reshape(-1, 2)
    total = vectors.sum(axis=0)
    e2 = 0.0
    for i in range(len(y)):
        for j in range(i + 1, len(y)):
            e2 += math.cos(OMEGA * (y[i] - y[j]))
    return FeatureSet(K=len(y), F=total, E2=e2, L2=float(total @ total))


def sample_accretion(rng: np.random.Generator) -> np.ndarray:
    """Centres of all disks attached to the central disk, shape ``(n, 2)``.

    The first disk sits at ``(1, 0)``; the rest come from a parking run on
    ``[1, 6]`` mapped onto the circle.
    """
    sample = sample_renyi(5.0, rng, start=1.0)
    return np.vstack([[1.0, 0.0], circle_points(sample.positions).reshape(-1, 2)])


def simulate_batch(x: float, seed: int, start: int, stop: int, keep_positions: bool = False) -> dict:
    """Vectorised run of samples ``start .. stop - 1``; same law and draws as :func:`sample_renyi`.

    Returns per-sample arrays ``K``, ``F`` (n, 2), ``E2``, ``L2`` and, if
    requested, ``positions`` (n, max_cars) padded with NaN in placement order.
    """
    n = stop - start
    kmax = max_cars(x)
    m = draws_per_sample(x)
    bitgen = np.random.Philox(key=seed)
    bitgen.advance(start * m // 4)
    draws = np.random.Generator(bitgen).random((n, m))

    positions = np.full((n, kmax), np.nan)
    if kmax:
        gap_starts = np.zeros((n, kmax + 1))
        gap_lengths = np.zeros((n, kmax + 1))
        gap_lengths[:, 0] = x
        rows = np.arange(n)
        for step in range(kmax):
            measures = np.where(gap_lengths - 1.0 > 0, gap_lengths - 1.0, 0.0)
            cumulative = np.cumsum(measures, axis=1)
            total = cumulative[:, -1]
            active = total > 0
            if not active.any():
                break
            target = draws[:, step] * total
            j = np.sum(cumulative <= target[:, None], axis=1)
            overflow = j >= kmax + 1
            if overflow.any():
                last_positive = kmax - np.argmax((measures > 0)[:, ::-1], axis=1)
                j = np.where(overflow, last_positive, j)
            before = np.where(j > 0, cumulative[rows, np.maximum(j - 1, 0)], 0.0)
            chosen = measures[rows, j]
            offset = np.minimum(np.maximum(target - before, 0.0), chosen)
            y = gap_starts[rows, j] + offset
            act = rows[active]
            positions[act, step] = y[active]
            gap_starts[act, step + 1] = y[active] + 1.0
            gap_lengths[act, step + 1] = chosen[active] - offset[active]
            gap_lengths[act, j[active]] = offset[active]

    placed = ~np.isnan(positions)
    vectors = np.where(placed[..., None], circle_points(np.nan_to_num(positions)), 0.0)
    f = vectors.sum(axis=1)
    e2 = np.zeros(n)
    for i in range(kmax):
        for j in range(i + 1, kmax):
            both = placed[:, i] & placed[:, j]
            diff = np.nan_to_num(positions[:, i] - positions[:, j])
            e2 += np.where(both, np.cos(OMEGA * diff), 0.0)
    out = {"K": placed.sum(axis=1), "F": f, "E2": e2, "L2": np.einsum("ij,ij->i", f, f)}
    if keep_positions:
        out["positions"] = positions
    return out


def _chunks(n_samples: int, chunk_size: int):
    return [(i, min(i + chunk_size, n_samples)) for i in range(0, n_samples, chunk_size)]


def _run_chunk(args):
    x, seed, start, stop = args
    return simulate_batch(x, seed, start, stop)


def simulate(x: float, n_samples: int, seed: int = 0, workers: int = 1,
             chunk_size: int = CHUNK_SIZE) -> dict[str, np.ndarray]:
    """Per-sample feature arrays for ``n_samples`` runs, concatenated in sample order."""
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")
    jobs = [(x, seed, a, b) for a, b in _chunks(n_samples, chunk_size)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(job) for job in jobs]
    return {name: np.concatenate([p[name] for p in parts]) for name in FEATURES}


def _mean_and_se(values: np.ndarray) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values.tolist()) / n
    if n < 2:
        return mean, 0.0
    var = math.fsum(((values - mean) ** 2).tolist()) / (n - 1)
    return mean, math.sqrt(var / n)


def summarize(samples: dict[str, np.ndarray], seed: int) -> dict[str, McEstimate]:
    out = {}
    for name in FEATURES:
        values = np.asarray(samples[name], dtype=float)
        n = len(values)
        if values.ndim == 2:
            stats = [_mean_and_se(values[:, c]) for c in range(values.shape[1])]
            out[name] = McEstimate(
                np.array([s[0] for s in stats]), np.array([s[1] for s in stats]), n, seed
            )
        else:
            mean, se = _mean_and_se(values)
            out[name] = McEstimate(mean, se, n, seed)
    return out


def estimate(x: float, n_samples: int, seed: int = 0, workers: int = 1) -> dict[str, McEstimate]:
    """Monte Carlo means and standard errors of K, F, E2 and L2 on ``[0, x]``."""
    return summarize(simulate(x, n_samples, seed, workers), seed)


def estimate_to_dict(x: float, estimates: dict[str, McEstimate]) -> dict:
    first = next(iter(estimates.values()))
    return {
        "x": float(x),
        "n_samples": first.n_samples,
        "seed": first.seed,
        "features": {name: est.to_dict() for name, est in estimates.items()},
    }
