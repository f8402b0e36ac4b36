"""Uniform-acceleration bookkeeping: exponents, path rescaling, residuals.

For contact order ell the embedded process is observed at steps t*n^alpha
and heights n^{alpha/2}, with alpha = 2*ell/(2*ell+1) kept as an exact
rational; n^alpha itself is evaluated as exp(alpha*log n) in double
precision (~1 ulp).  The physical queue at ell = 1 is observed at times
t*n^{-1/3} and heights n^{-1/3}.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .distributions import ArrivalModel, ServiceModel


@dataclass(frozen=True)
class RescaledPath:
    """A trajectory mapped to the limit scales.

    values[i] = raw(floor(times[i] * n^time_exp)) * n^(-space_exp), where
    raw indexing is steps for embedded paths and physical time for queue
    paths (time_exp < 0 then encodes physical-time compression).
    """

    times: np.ndarray
    values: np.ndarray
    n: int
    space_exp: Fraction
    time_exp: Fraction


def alpha(ell: int) -> Fraction:
    """Scaling exponent ell/(ell + 1/2) as an exact rational."""
    if ell is None or ell < 1:
        raise ValueError(f"contact order must be a positive integer, got {ell}")
    return Fraction(2 * ell, 2 * ell + 1)


def rescale_embedded(raw: np.ndarray, n: int, ell: int,
                     times: np.ndarray | None = None) -> RescaledPath:
    """Embedded sequence (N or Q, indexed by step, starting at step 0) on the
    limit scales: value(t) = raw[floor(t * n^alpha)] * n^{-alpha/2}."""
    raw = np.asarray(raw, dtype=float)
    if raw.size < 1:
        raise ValueError("need at least one step")
    a = alpha(ell)
    n_alpha = float(n) ** float(a)
    if times is None:
        t_max = (len(raw) - 1) / n_alpha
        times = np.arange(0.0, t_max + 1e-12, 0.05)
    times = np.asarray(times, dtype=float)
    idx = np.floor(times * n_alpha).astype(int)
    if np.any(idx >= len(raw)) or np.any(idx < 0):
        raise ValueError("requested times fall outside the recorded path")
    values = raw[idx] * float(n) ** (-float(a) / 2.0)
    return RescaledPath(times=times, values=values, n=n,
                        space_exp=a / 2, time_exp=a)


def rescale_physical(event_times: np.ndarray, levels: np.ndarray, n: int,
                     times: np.ndarray | None = None) -> RescaledPath:
    """Physical queue level on the limit scales (contact order 1):
    value(t) = level(t * n^{-1/3}) * n^{-1/3}.

    event_times/levels give the right-continuous step function recorded by
    the simulator (level after each event); level before the first event
    is the level at time 0 (first entry must be the time-0 state).
    """
    event_times = np.asarray(event_times, dtype=float)
    levels = np.asarray(levels, dtype=float)
    third = Fraction(1, 3)
    n_third = float(n) ** (1.0 / 3.0)
    if times is None:
        times = np.arange(0.0, 2.0 + 1e-12, 0.05)
    times = np.asarray(times, dtype=float)
    phys = times / n_third
    idx = np.searchsorted(event_times, phys, side="right") - 1
    vals = np.where(idx >= 0, levels[np.maximum(idx, 0)], 0.0)
    return RescaledPath(times=times, values=vals / n_third, n=n,
                        space_exp=third, time_exp=-third)


def busy_period_scale(n: int, ell: int = 1) -> float:
    """Multiplier turning a physical busy period into its limit variable:
    n^{1-alpha} (= n^{1/3} for ell=1, n^{1/5} for ell=2)."""
    return float(n) ** float(1 - alpha(ell))


def criticality_residual(arrival: ArrivalModel, service: ServiceModel,
                         n: int, beta: float, ell: int = 1) -> float:
    """n * f(0) * E[D] - (1 + beta * n^{-alpha/2}) with
    D = S * (1 + beta n^{-alpha/2}) / n; zero exactly when f(0) E[S] = 1."""
    a2 = float(alpha(ell)) / 2.0
    load = 1.0 + beta * float(n) ** (-a2)
    return arrival.f0 * service.mean * load - load


def offered_load(arrival: ArrivalModel, service: ServiceModel,
                 n: int, beta: float, ell: int = 1) -> float:
    """rho_n = n f(0) E[D]; equals 1 + beta n^{-alpha/2} under criticality."""
    a2 = float(alpha(ell)) / 2.0
    return arrival.f0 * service.mean * (1.0 + beta * float(n) ** (-a2))


def to_csv_rows(path: RescaledPath):
    """Rows for the `t,value,n,space_exp,time_exp` CSV convention."""
    for t, v in zip(path.times, path.values):
        yield (t, v, path.n, str(path.space_exp), str(path.time_exp))
