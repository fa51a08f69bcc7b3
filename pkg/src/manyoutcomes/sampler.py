"""Seeded Monte-Carlo draws, variance-of-mean experiments, and M-sweeps.

Randomness comes from numpy's PCG64 keyed by SeedSequence(entropy=seed,
spawn_key=(unit,)): trials are processed in fixed-size units and unit k uses
stream (seed, k), so output is bit-identical for a given seed regardless of
how the units are executed or merged.  Sweeps are deterministic summation
(no Monte Carlo): the plotted quantity is the distribution's actual variance.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .polydist import PolyDist, variance_exact

__all__ = [
    "SweepResult",
    "McEstimate",
    "unit_rng",
    "draw_sample_mean",
    "sample_means",
    "mc_variance_of_mean",
    "exceedance_frequency",
    "sweep",
    "loglog_fit",
]

_TRIALS_PER_UNIT = 4096  # stream-splitting granularity; part of the output contract


def map_indexed(fn: Callable, items: Sequence, workers: int = 1) -> list:
    """Apply fn over items, optionally on a thread pool; results always merge
    in index order, so worker count never changes the output."""
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def unit_rng(seed: int, unit: int) -> np.random.Generator:
    """Deterministic per-unit generator: PCG64(SeedSequence(seed, spawn_key=(unit,)))."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(unit,))))


def draw_sample_mean(dist: PolyDist, N: int, rng: np.random.Generator) -> float:
    """Mean of N i.i.d. draws via inverse-CDF lookup on the cumulative table."""
    if N < 1:
        raise ValueError("sample size N must be >= 1")
    u = rng.random(N)
    draws = np.searchsorted(dist.cdf_table, u, side="right")
    return float(draws.mean())


def sample_means(dist: PolyDist, N: int, trials: int, seed: int) -> np.ndarray:
    """``trials`` independent sample means, unit-streamed for determinism."""
    if N < 1 or trials < 1:
        raise ValueError("need N >= 1 and trials >= 1")
    cdf = dist.cdf_table
    out = np.empty(trials)
    pos = 0
    unit = 0
    while pos < trials:
        count = min(_TRIALS_PER_UNIT, trials - pos)
        u = unit_rng(seed, unit).random((count, N))
        out[pos : pos + count] = np.searchsorted(cdf, u, side="right").mean(axis=1)
        pos += count
        unit += 1
    return out


@dataclass(frozen=True)
class McEstimate:
    """Empirical counterpart of the variance-of-the-sample-mean identity."""

    mean: float
    variance_of_sample_mean: float
    trials: int
    seed: int
    standard_error: float  # of the mean of means: std(means)/sqrt(trials)
    variance_standard_error: float  # of the variance estimate, moment-based

    def consistent_with(self, target: float, k_sigma: float = 4.0) -> bool:
        return abs(self.variance_of_sample_mean - target) <= k_sigma * self.variance_standard_error


def mc_variance_of_mean(dist: PolyDist, N: int, trials: int, seed: int) -> McEstimate:
    """Empirical variance of ``trials`` sample means of size N."""
    if trials < 100:
        raise ValueError("need at least 100 trials for a stable variance estimate")
    means = sample_means(dist, N, trials, seed)
    mu = float(means.mean())
    centered = means - mu
    var = float((centered**2).sum() / (trials - 1))
    m2 = float((centered**2).mean())
    m4 = float((centered**4).mean())
    var_se = float(np.sqrt(max(m4 - m2 * m2, 0.0) / trials))
    return McEstimate(
        mean=mu,
        variance_of_sample_mean=var,
        trials=trials,
        seed=seed,
        standard_error=float(np.sqrt(var / trials)),  # sample std of means / sqrt(trials)
        variance_standard_error=var_se,
    )


def exceedance_frequency(dist: PolyDist, N: int, eps: float, trials: int, seed: int) -> float:
    """Empirical P(|sample mean - mu| >= eps); the Chebyshev-side quantity."""
    means = sample_means(dist, N, trials, seed)
    mu = float(dist.mean())
    return float(np.mean(np.abs(means - mu) >= eps))


@dataclass(frozen=True)
class SweepResult:
    """(M, variance-of-sample-mean) points with a log-log polynomial fit."""

    points: tuple[tuple[int, float], ...]
    fit: tuple[float, ...]  # (c0, c1, c2, ..): ln v = c0 + c1 ln M + c2 (ln M)^2 + ..

    def to_dict(self) -> dict:
        return {"points": [[m, v] for m, v in self.points], "fit": list(self.fit)}


def sweep(
    family: Callable[[int], PolyDist],
    M_grid: Sequence[int],
    N: int = 1,
    fit_degree: int = 2,
    workers: int = 1,
) -> SweepResult:
    """Deterministic variance sweep over the grid; value = sigma^2 / N.

    Grid points are independent and may be evaluated on ``workers`` threads;
    the result merges in grid order either way.
    """
    if N < 1:
        raise ValueError("sample size N must be >= 1")
    grid = [int(m) for m in M_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("M_grid must be strictly increasing")
    values = map_indexed(lambda m: float(variance_exact(family(m))) / N, grid, workers)
    points = list(zip(grid, values))
    fit = loglog_fit(points, degree=fit_degree)
    return SweepResult(tuple(points), fit)


def loglog_fit(points, degree: int = 2) -> tuple[float, ...]:
    """OLS of ln(value) on powers of ln(M); natural logarithm throughout.

    Returns coefficients ascending: value ~ exp(c0) * M**c1 * exp(c2 (ln M)^2).
    """
    ms = np.asarray([p[0] for p in points], dtype=np.float64)
    vs = np.asarray([p[1] for p in points], dtype=np.float64)
    if len(ms) < degree + 2:
        raise ValueError(f"need at least degree+2 = {degree + 2} points")
    if (vs <= 0).any():
        raise ValueError("log-log fit needs strictly positive values")
    coeffs = np.polyfit(np.log(ms), np.log(vs), degree)
    return tuple(float(c) for c in coeffs[::-1])
