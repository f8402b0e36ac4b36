"""Limit-process sampler: W(t) = q + a*t + c*t^m + sigma*B(t).

Because the drift is deterministic and additive, the Euler scheme is exact
in law on its grid: W(t_k) = q + drift(t_k) + sigma * (cumulative Gaussian).
Paths are simulated that way.  The Skorokhod reflection and the first
hitting time of zero are path functionals on the grid; hitting detection
is discrete crossing (no bridge correction), biased O(sqrt(dt)).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

CENSORED = float("inf")  # marker for paths that never hit before the horizon


@dataclass(frozen=True)
class DriftSpec:
    """q + a*t + c*t^m + sigma*B(t); m = contact order + 1, c typically < 0."""

    q: float
    a: float
    c: float
    m: int
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        if self.m < 2:
            raise ValueError(f"polynomial degree m must be >= 2, got {self.m}")
        if self.q < 0:
            raise ValueError(f"initial level q must be >= 0, got {self.q}")

    def drift(self, t):
        t = np.asarray(t, dtype=float)
        return self.a * t + self.c * t ** self.m

    def default_horizon(self) -> float:
        """Far beyond the drift turning point; censoring is then negligible."""
        turn = (abs(self.a) / abs(self.c)) ** (1.0 / (self.m - 1)) if self.c else 1.0
        return 4.0 * max(turn, 1.0) + 20.0 * self.sigma

    # --- factories for the heavy-traffic limits -------------------------

    @staticmethod
    def exponential_queue(q: float, beta: float, lam: float, es2: float) -> "DriftSpec":
        """Physical-queue limit for rate-lam exponential arrivals:
        W = q + beta*lam*t - (lam^2/2) t^2, sigma^2 = lam^3 E[S^2]."""
        return DriftSpec(q, beta * lam, -lam ** 2 / 2.0, 2, lam ** 1.5 * math.sqrt(es2))

    @staticmethod
    def general_queue(q: float, beta: float, f0: float, f0_prime: float,
                      es2: float) -> "DriftSpec":
        """Physical busy-period limit for general arrivals (f'(0) < 0):
        W = q + beta*f0*t + (f'(0)/2) t^2, sigma^2 = f0^3 E[S^2]."""
        return DriftSpec(q, beta * f0, f0_prime / 2.0, 2, f0 ** 1.5 * math.sqrt(es2))

    @staticmethod
    def embedded_general(beta: float, f0: float, f0_prime: float,
                         es2: float) -> "DriftSpec":
        """Embedded-process limit: W = beta*t + (f'(0)/(2 f0^2)) t^2,
        sigma^2 = f0^2 E[S^2]."""
        return DriftSpec(0.0, beta, f0_prime / (2.0 * f0 ** 2), 2,
                         f0 * math.sqrt(es2))


@dataclass(frozen=True)
class DiffusionPath:
    dt: float
    values: np.ndarray

    def times(self) -> np.ndarray:
        return self.dt * np.arange(len(self.values))


def simulate_w(spec: DriftSpec, horizon: float, dt: float,
               rng: np.random.Generator) -> DiffusionPath:
    """Exact-in-law path of W on the grid {0, dt, 2dt, ...} up to horizon."""
    if dt <= 0 or dt > horizon:
        raise ValueError(f"need 0 < dt <= horizon, got dt={dt}, horizon={horizon}")
    n = int(math.floor(horizon / dt)) + 1
    t = dt * np.arange(n)
    noise = np.empty(n)
    noise[0] = 0.0
    np.cumsum(rng.standard_normal(n - 1), out=noise[1:])
    values = spec.q + spec.drift(t) + spec.sigma * math.sqrt(dt) * noise
    return DiffusionPath(dt=dt, values=values)


def reflect(values) -> np.ndarray:
    """Skorokhod map phi(f)(x) = f(x) - inf_{y<=x} min(f(y), 0), single pass."""
    v = np.asarray(values, dtype=float)
    if v.size == 0:
        raise ValueError("reflect needs a nonempty sequence")
    return v - np.minimum.accumulate(np.minimum(v, 0.0))


def hitting_time_zero(path: DiffusionPath) -> float:
    """First grid time with value <= 0; CENSORED if the horizon is reached."""
    v = path.values
    if v[0] <= 0:
        raise ValueError("hitting time undefined: path does not start above 0")
    hits = np.nonzero(v <= 0.0)[0]
    if len(hits) == 0:
        return CENSORED
    return float(hits[0] * path.dt)


def sample_hitting_times(spec: DriftSpec, n_paths: int, dt: float,
                         rng: np.random.Generator,
                         horizon: Optional[float] = None,
                         chunk: int = 512) -> np.ndarray:
    """Hitting times of 0 for n_paths independent W paths (CENSORED entries
    for paths alive at the horizon).

    Law-identical to simulate_w + hitting_time_zero; paths advance in
    lock-step chunks with finished paths dropped, so memory stays at
    O(alive * chunk).
    """
    if spec.q <= 0:
        raise ValueError("hitting time undefined: q must be > 0")
    if horizon is None:
        horizon = spec.default_horizon()
    out = np.full(n_paths, CENSORED)
    alive = np.arange(n_paths)
    level = np.full(n_paths, float(spec.q))
    step0 = 0
    sdt = spec.sigma * math.sqrt(dt)
    n_steps_total = int(math.floor(horizon / dt))
    while len(alive) and step0 < n_steps_total:
        k = min(chunk, n_steps_total - step0)
        t_grid = dt * (step0 + 1 + np.arange(k))
        drift_inc = spec.drift(t_grid) - spec.drift(dt * step0)
        z = rng.standard_normal((len(alive), k))
        np.cumsum(z, axis=1, out=z)
        w = level[alive, None] + drift_inc[None, :] + sdt * z
        hit = w <= 0.0
        any_hit = hit.any(axis=1)
        first = np.where(any_hit, hit.argmax(axis=1), k - 1)
        t_hit = dt * (step0 + 1 + first)
        out[alive[any_hit]] = t_hit[any_hit]
        still = ~any_hit
        level[alive[still]] = w[still, k - 1]
        alive = alive[still]
        step0 += k
    return out
