"""Seeded Monte Carlo execution and summary statistics."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import stats

__all__ = ["MonteCarloSummary", "summarize_mean", "summarize_proportion",
           "wilson_interval", "run_trials"]

BLOCK = 512


@dataclass(frozen=True)
class MonteCarloSummary:
    metric: str
    mean: float
    ci95_low: float
    ci95_high: float
    trials: int

    def __post_init__(self):
        if not self.ci95_low <= self.mean <= self.ci95_high:
            raise ValueError("confidence interval does not bracket the mean")


def wilson_interval(successes, trials, z=1.959963984540054):
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be >= 1")
    p = successes / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * np.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, float(centre - half))
    hi = 1.0 if successes == trials else min(1.0, float(centre + half))
    return lo, hi


def summarize_proportion(metric, indicators):
    x = np.asarray(indicators, dtype=bool)
    n = x.size
    k = int(x.sum())
    lo, hi = wilson_interval(k, n)
    p = k / n
    return MonteCarloSummary(metric, p, min(lo, p), max(hi, p), n)


def summarize_mean(metric, samples):
    """Mean with a two-sided 95% Student-t interval."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    m = float(x.mean())
    if n < 2:
        return MonteCarloSummary(metric, m, m, m, n)
    half = stats.t.ppf(0.975, n - 1) * x.std(ddof=1) / np.sqrt(n)
    return MonteCarloSummary(metric, m, m - half, m + half, n)


def run_trials(trial_fn, trials, threads=1):
    """Evaluate ``trial_fn(t)`` for ``t = 0..trials-1`` and stack the results.

    Each trial must draw its randomness only from substreams keyed by its
    own index, so the stacked array, and every reduction over it, is the
    same for any thread count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")

    def block(start):
        return [np.asarray(trial_fn(t)) for t in range(start, min(start + BLOCK, trials))]

    starts = range(0, trials, BLOCK)
    if threads <= 1:
        chunks = map(block, starts)
        out = [r for c in chunks for r in c]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = [r for c in pool.map(block, starts) for r in c]
    return np.stack(out)
