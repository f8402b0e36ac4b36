"""Event-level simulation of the finite-population single-server queue and
of its service-completion-embedded approximation.

Physical model: n customers carry i.i.d. arrival clocks; the sorted clock
values are the arrival times.  An extra block of ceil(q * n^{alpha/2})
customers (outside the population of n) sits in queue at time zero.  The
single FIFO server draws i.i.d. service requirements S scaled by
(1 + beta * n^{-alpha/2}) / n.  Departure times satisfy
dep_j = max(dep_{j-1}, arr_j) + D_j, which unrolls to the vectorized form
dep = cumsum(D) + running_max(arr - shifted cumsum(D)).

Embedded model: Q(k) = max(Q(k-1) + A(k) - 1, 0) and N(k) = N(k-1) + A(k) - 1,
where A(k) is the number of arrivals during the k-th service.  The server
never idles: when a service completes leaving an empty queue and no
arrivals occurred during it, the earliest remaining clock is removed from
the population and served next ("pull").  Pulls therefore coincide with
new minima of N, so the busy-start count beta_n(k) = -min_{j<=k} min(N(j), 0)
counts them exactly, and the population available during service k is
P(k) = n + q0 - k - Q(k-1).  For exponential clocks the arrivals are
conditionally Binomial(P(k), 1 - exp(-lambda * D_k)) with clocks redrawn
each step; for general clocks the fixed sorted clock sequence is consumed
left to right.  Each pull contributes a virtual idle period: the time the
physical server would have waited (an Exp(lambda * P) variable in the
exponential model, the overshoot of the pulled clock in the general one).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .distributions import (ArrivalModel, ServiceModel, sample_sorted_clocks,
                            sorted_clock_state, extend_sorted_clocks_u)
from .scaling import alpha

CENSORED = float("inf")

ARRIVAL = 1
DEPARTURE = -1


class PopulationExhausted(RuntimeError):
    pass


@dataclass(frozen=True)
class HeavyTrafficConfig:
    """Population size and heavy-traffic offsets.

    alpha = ell/(ell + 1/2); the service multiplier is
    (1 + beta * n^{-alpha/2}) / n and the initial queue holds
    ceil(q * n^{alpha/2}) customers.
    """

    n: int
    beta: float = 0.0
    ell: int = 1
    q: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"population n must be >= 1, got {self.n}")
        if self.q < 0:
            raise ValueError(f"initial-queue coefficient q must be >= 0, got {self.q}")
        alpha(self.ell)  # validates ell

    @property
    def alpha(self):
        return alpha(self.ell)

    @property
    def half_alpha(self) -> float:
        return float(self.alpha) / 2.0

    @property
    def service_multiplier(self) -> float:
        return (1.0 + self.beta * self.n ** (-self.half_alpha)) / self.n

    @property
    def initial_queue(self) -> int:
        # guard against float slop pushing an exact integer up a notch
        return int(math.ceil(self.q * self.n ** self.half_alpha - 1e-9))


@dataclass(frozen=True)
class QueuePath:
    """Physical-queue trajectory: level after each event, in event order."""

    times: np.ndarray            # event times
    kinds: np.ndarray            # ARRIVAL (+1) / DEPARTURE (-1)
    levels: np.ndarray           # queue level just after the event
    first_busy_period: float     # CENSORED if the horizon cut it off
    total_idle: float
    served_count: int
    n: int
    initial_queue: int


@dataclass(frozen=True)
class EmbeddedPath:
    """Embedded trajectory; index k runs 0..K with step arrays of length K."""

    Q: np.ndarray                # Q[k], Q[0] = initial queue
    N: np.ndarray                # N[k], N[0] = initial queue
    A: np.ndarray                # A[k-1] = arrivals during service k
    busy_starts: np.ndarray      # beta_n[k] = -min_{j<=k} min(N[j], 0)
    virtual_idle_cum: np.ndarray # cumulative virtual idle through step k
    n: int


def _busy_starts(N: np.ndarray) -> np.ndarray:
    return -np.minimum.accumulate(np.minimum(N, 0))


# ---------------------------------------------------------------------------
# physical queue
# ---------------------------------------------------------------------------

def _departure_times(arr: np.ndarray, D: np.ndarray) -> np.ndarray:
    """dep_j = max(dep_{j-1}, arr_j) + D_j as one vectorized scan."""
    cum = np.cumsum(D)
    slack = arr - np.concatenate([[0.0], cum[:-1]])
    return cum + np.maximum.accumulate(slack)


def simulate_delta_queue(cfg: HeavyTrafficConfig, arrival: ArrivalModel,
                         service: ServiceModel, rng: np.random.Generator,
                         horizon: Optional[float] = None) -> QueuePath:
    """Full event path; horizon=None drains the whole population.

    The service model must already be critically rescaled; this routine
    applies only the heavy-traffic multiplier from cfg.
    """
    q0 = cfg.initial_queue
    if horizon is None:
        clocks = sample_sorted_clocks(arrival, cfg.n, rng)
    else:
        # only clocks ringing inside the horizon matter; generate lazily
        f_h = float(arrival.cdf(horizon))
        state = sorted_clock_state(cfg.n)
        u = extend_sorted_clocks_u(state, max(64, int(1.2 * f_h * cfg.n) + 32), rng)
        while state["i"] < cfg.n and (u.size == 0 or u[-1] <= f_h):
            u = np.concatenate([u, extend_sorted_clocks_u(state, max(64, u.size), rng)])
        u = u[u <= f_h]
        clocks = np.asarray(arrival.ppf(u), dtype=float) if u.size else np.empty(0)
        clocks = np.maximum.accumulate(clocks) if clocks.size else clocks
    arr = np.concatenate([np.zeros(q0), clocks])
    n_cust = len(arr)
    if n_cust == 0:
        return QueuePath(np.empty(0), np.empty(0, dtype=np.int8), np.empty(0, dtype=np.int64),
                         CENSORED, horizon or 0.0, 0, cfg.n, q0)
    D = service.sample(rng, n_cust) * cfg.service_multiplier
    dep = _departure_times(arr, D)

    if horizon is not None:
        dep_keep = dep[dep <= horizon]
    else:
        dep_keep = dep
    served = len(dep_keep)

    times = np.concatenate([arr, dep_keep])
    kinds = np.concatenate([np.full(n_cust, ARRIVAL, dtype=np.int8),
                            np.full(served, DEPARTURE, dtype=np.int8)])
    order = np.argsort(times, kind="stable")
    times = times[order]
    kinds = kinds[order]
    levels = np.cumsum(kinds.astype(np.int64))

    # first busy period: first time the level returns to 0, given q0 > 0
    if q0 > 0:
        zeros = np.nonzero(levels == 0)[0]
        bp = float(times[zeros[0]]) if len(zeros) else CENSORED
    else:
        bp = CENSORED  # undefined start; first_busy_period() rejects this path

    # idle = gaps where the server waits for the next arrival
    prev_dep = np.concatenate([[0.0], dep[:n_cust - 1]])
    gaps = np.maximum(arr - prev_dep, 0.0)
    if horizon is None:
        total_idle = float(np.sum(gaps))
    else:
        lo = np.minimum(prev_dep, horizon)
        hi = np.minimum(np.maximum(arr, prev_dep), horizon)
        total_idle = float(np.sum(np.maximum(hi - lo, 0.0)))
        if served == n_cust and len(dep):
            total_idle += max(horizon - float(dep[-1]), 0.0)
    return QueuePath(times, kinds, levels, bp, total_idle, served, cfg.n, q0)


def first_busy_period(path: QueuePath) -> float:
    """inf{t > 0 : level(t) = 0}; requires a positive level at time 0."""
    if path.initial_queue < 1:
        raise ValueError("first busy period undefined: initial level is 0")
    return path.first_busy_period


def sample_busy_periods(cfg: HeavyTrafficConfig, arrival: ArrivalModel,
                        service: ServiceModel, n_reps: int,
                        seed_seq: np.random.SeedSequence) -> np.ndarray:
    """First busy periods (physical time) over independent replications.

    Within its first busy period the server never idles, so the level after
    the k-th departure is q0 + #arrivals(<= Sigma_k) - k with Sigma the
    cumulative service times, and the busy period ends at the first zero.
    Services and sorted clocks are generated lazily in geometrically grown
    blocks, so each replication costs O(n^alpha) rather than O(n).
    """
    q0 = cfg.initial_queue
    if q0 < 1:
        raise ValueError("busy-period sampling needs q > 0 (initial level >= 1)")
    mult = cfg.service_multiplier
    n = cfg.n
    block0 = int(3.2 * n ** float(cfg.alpha)) + 64
    out = np.empty(n_reps)
    for r, child in enumerate(seed_seq.spawn(n_reps)):
        rng = np.random.default_rng(child)
        svc = service.sample(rng, block0)
        cstate = sorted_clock_state(n)
        u = extend_sorted_clocks_u(cstate, block0 + q0, rng)
        while True:
            sigma = np.cumsum(svc) * mult
            f_hi = float(arrival.cdf(sigma[-1]))
            while (len(u) == 0 or u[-1] < f_hi) and cstate["i"] < n:
                u = np.concatenate([u, extend_sorted_clocks_u(cstate, len(u) + 256, rng)])
            counts = np.searchsorted(u, arrival.cdf(sigma), side="right")
            level = q0 + counts - np.arange(1, len(sigma) + 1)
            zeros = np.nonzero(level == 0)[0]
            if len(zeros):
                out[r] = sigma[zeros[0]]
                break
            if len(svc) >= n + q0:
                raise AssertionError("queue failed to drain within the population")
            svc = np.concatenate([svc, service.sample(rng, len(svc))])
    return out


# ---------------------------------------------------------------------------
# embedded models
# ---------------------------------------------------------------------------

def _binomial_inverse(u: float, n: int, p: float) -> int:
    """Binomial draw by CDF inversion from a single uniform (monotone in p)."""
    if n <= 0 or p <= 0.0:
        return 0
    if p >= 1.0:
        return n
    pmf = (1.0 - p) ** n
    cdf = pmf
    k = 0
    ratio = p / (1.0 - p)
    while u > cdf and k < n:
        pmf *= (n - k) / (k + 1.0) * ratio
        k += 1
        cdf += pmf
    return k


def simulate_embedded_exponential(cfg: HeavyTrafficConfig, rate: float,
                                  service: ServiceModel, steps: int,
                                  rng: np.random.Generator) -> EmbeddedPath:
    """Embedded queue with rate-`rate` exponential clocks, redrawn each step.

    A(k) ~ Binomial(P(k), 1 - exp(-rate * D_k)) with
    P(k) = n + q0 - k - Q(k-1).  Binomial draws use single-uniform CDF
    inversion while the mean is below 30 (this keeps the draw monotone in
    the success probability for coupling arguments) and numpy's sampler
    otherwise.  Idle draws come from a separate child stream so that the
    main (service, uniform) stream stays aligned across parameter changes.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    q0 = cfg.initial_queue
    n = cfg.n
    mult = cfg.service_multiplier
    main, idle_rng = rng.spawn(2)

    Q = np.empty(steps + 1, dtype=np.int64)
    N = np.empty(steps + 1, dtype=np.int64)
    A = np.empty(steps, dtype=np.int64)
    idle_cum = np.zeros(steps + 1)
    Q[0] = N[0] = q0
    idle_total = 0.0
    for k in range(1, steps + 1):
        P = n + q0 - k - Q[k - 1]
        if P < 0:
            raise PopulationExhausted(
                f"step {k}: population exhausted (queue {Q[k-1]} of {n})")
        d = float(service.sample(main, 1)[0]) * mult
        p = -math.expm1(-rate * d)
        u = main.random()
        if P * p < 30.0:
            a = _binomial_inverse(u, P, p)
        else:
            a = int(main.binomial(P, p))
        A[k - 1] = a
        N[k] = N[k - 1] + a - 1
        Q[k] = max(Q[k - 1] + a - 1, 0)
        if Q[k - 1] == 0 and a == 0 and P > 0:
            idle_total += idle_rng.exponential(1.0) / (rate * P)
        idle_cum[k] = idle_total
    return EmbeddedPath(Q, N, A, _busy_starts(N), idle_cum, n)


def simulate_embedded_general(cfg: HeavyTrafficConfig, arrival: ArrivalModel,
                              service: ServiceModel, steps: int,
                              rng: np.random.Generator) -> EmbeddedPath:
    """Embedded queue with a fixed sorted clock sequence.

    The embedded clock runs on served time only: when a pull occurs, the
    physical idle gap (the pulled clock's overshoot) is excised, and the
    accumulated excised time shifts every later arrival window.  A(k) thus
    counts clocks landing in (I + Sigma_{k-1}, I + Sigma_k], with I the
    cumulative virtual idle at the start of the window.  The pulled clock's
    ring time is observed, so after a pull the remaining clocks carry no
    selection bias; for exponential clocks this model coincides in law with
    the redrawn-clock binomial model.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    q0 = cfg.initial_queue
    n = cfg.n
    mult = cfg.service_multiplier

    svc = service.sample(rng, steps) * mult
    sigma = np.cumsum(svc)

    cstate = sorted_clock_state(n)
    u = extend_sorted_clocks_u(cstate, min(n, steps + 64), rng)

    Q = np.empty(steps + 1, dtype=np.int64)
    N = np.empty(steps + 1, dtype=np.int64)
    A = np.empty(steps, dtype=np.int64)
    idle_cum = np.zeros(steps + 1)
    Q[0] = N[0] = q0
    idle_total = 0.0
    i0 = 0
    if q0 == 0:
        i0 = 1  # time-zero pull: the earliest clock goes straight into service
    for k in range(1, steps + 1):
        if i0 > n:
            raise PopulationExhausted(f"step {k}: no clocks left to serve")
        f_hi = float(arrival.cdf(idle_total + sigma[k - 1]))
        a = 0
        while True:
            while i0 + a >= len(u) and cstate["i"] < n:
                u = np.concatenate(
                    [u, extend_sorted_clocks_u(cstate, max(len(u), 64), rng)])
            if i0 + a >= len(u) or u[i0 + a] > f_hi:
                break
            a += 1
        i0 += a
        A[k - 1] = a
        N[k] = N[k - 1] + a - 1
        Q[k] = max(Q[k - 1] + a - 1, 0)
        if Q[k - 1] == 0 and a == 0:
            while i0 >= len(u) and cstate["i"] < n:
                u = np.concatenate(
                    [u, extend_sorted_clocks_u(cstate, max(len(u), 64), rng)])
            if i0 >= len(u):
                raise PopulationExhausted(f"step {k}: no clocks left to pull")
            t_pull = float(arrival.ppf(u[i0]))
            idle_total += t_pull - (idle_total + float(sigma[k - 1]))
            i0 += 1
        idle_cum[k] = idle_total
    return EmbeddedPath(Q, N, A, _busy_starts(N), idle_cum, n)


# ---------------------------------------------------------------------------
# lock-step replication drivers (law-identical to the single-path routines)
# ---------------------------------------------------------------------------

def embedded_exponential_batch(cfg: HeavyTrafficConfig, rate: float,
                               service: ServiceModel, steps: int, n_reps: int,
                               rng: np.random.Generator,
                               record_steps=None) -> dict:
    """Vectorized replications of the exponential embedded model.

    Returns {"N": (reps, len(record_steps)), "Q": ..., "A1": first-step
    arrivals} with N/Q recorded at `record_steps` (default: the final step).
    Arrival counts use numpy's binomial sampler; the law matches the
    single-path routine though the stream layout differs.
    """
    if record_steps is None:
        record_steps = [steps]
    record_steps = list(record_steps)
    q0 = cfg.initial_queue
    n = cfg.n
    mult = cfg.service_multiplier
    Q = np.full(n_reps, q0, dtype=np.int64)
    N = np.full(n_reps, q0, dtype=np.int64)
    rec_N = np.empty((n_reps, len(record_steps)), dtype=np.int64)
    rec_Q = np.empty((n_reps, len(record_steps)), dtype=np.int64)
    a1 = None
    rec_pos = {s: i for i, s in enumerate(record_steps)}
    if 0 in rec_pos:
        rec_N[:, rec_pos[0]] = N
        rec_Q[:, rec_pos[0]] = Q
    for k in range(1, steps + 1):
        P = n + q0 - k - Q
        if np.any(P < 0):
            raise PopulationExhausted(f"step {k}: population exhausted in a replication")
        d = service.sample(rng, n_reps) * mult
        p = -np.expm1(-rate * d)
        a = rng.binomial(P, p)
        if k == 1:
            a1 = a.copy()
        N += a - 1
        Q = np.maximum(Q + a - 1, 0)
        if k in rec_pos:
            rec_N[:, rec_pos[k]] = N
            rec_Q[:, rec_pos[k]] = Q
    return {"N": rec_N, "Q": rec_Q, "A1": a1, "record_steps": record_steps}


def embedded_general_batch(cfg: HeavyTrafficConfig, arrival: ArrivalModel,
                           service: ServiceModel, steps: int, n_reps: int,
                           rng: np.random.Generator,
                           record_steps=None, rep_block: int = 2500) -> dict:
    """Vectorized replications of the general embedded model.

    Same idle-excision semantics as simulate_embedded_general: each pull
    shifts later arrival windows by the pulled clock's overshoot.  The
    per-step arrival count advances a per-replication pointer into the
    sorted uniform clock prefix with gather operations, so work stays
    proportional to the number of clocks consumed.
    """
    if record_steps is None:
        record_steps = [steps]
    record_steps = list(record_steps)
    q0 = cfg.initial_queue
    n = cfg.n
    mult = cfg.service_multiplier
    rec_pos = {s: i for i, s in enumerate(record_steps)}
    rec_N = np.empty((n_reps, len(record_steps)), dtype=np.int64)
    rec_Q = np.empty((n_reps, len(record_steps)), dtype=np.int64)
    a1 = np.empty(n_reps, dtype=np.int64)

    # idle shifts are O(n^{-1}) each and rare, so a modest margin on top of
    # the zero-idle prefix bound covers the shifted windows too
    m = steps + int(10 * math.sqrt(steps + 25)) + 96
    m = min(m, n)
    denom = (n - np.arange(m)).astype(float)

    for lo in range(0, n_reps, rep_block):
        hi = min(lo + rep_block, n_reps)
        r = hi - lo
        rows = np.arange(r)
        d = service.sample(rng, (r, steps)) * mult
        sigma = np.cumsum(d, axis=1)
        e = rng.exponential(1.0, (r, m)) / denom
        np.cumsum(e, axis=1, out=e)
        u = -np.expm1(-e)
        u_pad = np.concatenate([u, np.full((r, 1), 2.0)], axis=1)  # sentinel > any F
        Q = np.full(r, q0, dtype=np.int64)
        N = np.full(r, q0, dtype=np.int64)
        idle = np.zeros(r)
        i0 = np.full(r, 1 if q0 == 0 else 0, dtype=np.int64)
        if 0 in rec_pos:
            rec_N[lo:hi, rec_pos[0]] = N
            rec_Q[lo:hi, rec_pos[0]] = Q
        for k in range(1, steps + 1):
            f_hi = np.asarray(arrival.cdf(idle + sigma[:, k - 1]))
            a = np.zeros(r, dtype=np.int64)
            while True:
                take = u_pad[rows, i0 + a] <= f_hi
                if not take.any():
                    break
                a += take
            if np.any(i0 + a >= m) and m < n:
                raise AssertionError("clock prefix too short; raise the margin")
            i0 += a
            if k == 1:
                a1[lo:hi] = a
            N += a - 1
            pull = (Q == 0) & (a == 0)
            Q = np.maximum(Q + a - 1, 0)
            if pull.any():
                if np.any(i0[pull] >= m) and m < n:
                    raise AssertionError("clock prefix too short; raise the margin")
                if np.any(i0[pull] >= n):
                    raise PopulationExhausted(
                        f"step {k}: population exhausted in a replication")
                u_next = u_pad[rows[pull], i0[pull]]
                t_pull = np.asarray(arrival.ppf(u_next), dtype=float)
                idle[pull] = t_pull - sigma[pull, k - 1]
                i0 += pull
            if k in rec_pos:
                rec_N[lo:hi, rec_pos[k]] = N
                rec_Q[lo:hi, rec_pos[k]] = Q
    return {"N": rec_N, "Q": rec_Q, "A1": a1, "record_steps": record_steps}


# ---------------------------------------------------------------------------
# CSV export
# ---------------------------------------------------------------------------

def embedded_csv_rows(path: EmbeddedPath):
    """Rows for `step,Q,N,A,beta_n` (A is blank for step 0)."""
    yield (0, int(path.Q[0]), int(path.N[0]), "", int(path.busy_starts[0]))
    for k in range(1, len(path.Q)):
        yield (k, int(path.Q[k]), int(path.N[k]), int(path.A[k - 1]),
               int(path.busy_starts[k]))


def physical_csv_rows(path: QueuePath):
    """Rows for `time,kind,level`."""
    names = {ARRIVAL: "arrival", DEPARTURE: "departure"}
    for t, k, lvl in zip(path.times, path.kinds, path.levels):
        yield (t, names[int(k)], int(lvl))
