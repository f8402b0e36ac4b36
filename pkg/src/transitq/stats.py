"""Estimators and diagnostics: Monte Carlo summaries, Gaussian KDE,
Kolmogorov-Smirnov distances, relative errors."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class McSummary:
    count: int
    mean: float
    std_error: float
    ci95_low: float
    ci95_high: float
    censored_count: int

    def to_json(self) -> dict:
        return {"count": self.count, "mean": self.mean,
                "std_error": self.std_error, "ci95_low": self.ci95_low,
                "ci95_high": self.ci95_high, "censored_count": self.censored_count}


def mc_summary(samples, censored: int = 0) -> McSummary:
    """Unbiased mean/SE summary; censored draws are excluded by the caller
    and only reported here."""
    s = np.asarray(samples, dtype=float)
    if s.size < 2:
        raise ValueError(f"need at least 2 samples, got {s.size}")
    mean = float(np.mean(s))
    se = float(np.std(s, ddof=1)) / math.sqrt(s.size)
    return McSummary(int(s.size), mean, se, mean - 1.96 * se, mean + 1.96 * se,
                     int(censored))


def silverman_bandwidth(samples) -> float:
    """0.9 * min(std, IQR/1.34) * n^{-1/5}."""
    s = np.asarray(samples, dtype=float)
    std = float(np.std(s, ddof=1))
    q75, q25 = np.percentile(s, [75, 25])
    iqr = float(q75 - q25)
    spread = min(std, iqr / 1.34) if iqr > 0 else std
    if spread <= 0:
        raise ValueError("degenerate sample: zero spread")
    return 0.9 * spread * s.size ** (-0.2)


def gaussian_kde(samples, grid, bandwidth: float | None = None) -> np.ndarray:
    """Standard-normal-kernel density estimate on `grid`."""
    s = np.asarray(samples, dtype=float)
    if s.size == 0:
        raise ValueError("gaussian_kde needs a nonempty sample")
    h = silverman_bandwidth(s) if bandwidth is None else float(bandwidth)
    if h <= 0:
        raise ValueError(f"bandwidth must be > 0, got {h}")
    g = np.asarray(grid, dtype=float)
    out = np.empty_like(g)
    norm = 1.0 / (s.size * h * math.sqrt(2.0 * math.pi))
    # chunk the grid to bound the (grid x sample) intermediate
    step = max(1, int(4e6 / max(s.size, 1)))
    for i in range(0, g.size, step):
        z = (g[i:i + step, None] - s[None, :]) / h
        out[i:i + step] = norm * np.sum(np.exp(-0.5 * z * z), axis=1)
    return out


def ks_distance(samples, cdf) -> float:
    """sup_x |F_n(x) - F(x)| against a callable CDF."""
    s = np.sort(np.asarray(samples, dtype=float))
    if s.size == 0:
        raise ValueError("ks_distance needs a nonempty sample")
    f = np.asarray(cdf(s), dtype=float)
    n = s.size
    upper = np.arange(1, n + 1) / n - f
    lower = f - np.arange(0, n) / n
    return float(max(np.max(upper), np.max(lower)))


def relative_error(estimate: float, exact: float) -> float:
    if exact == 0:
        raise ValueError("relative error undefined for exact = 0")
    return abs(estimate - exact) / abs(exact)
