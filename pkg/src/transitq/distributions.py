"""Arrival-clock and service-requirement distributions.

Arrival models carry the analytic quantities the heavy-traffic limits
consume: the CDF F, the density value f(0) and slope f'(0) at the origin,
and the contact order of f(t)*E[S] - 1 at zero.  Service models carry the
first two moments and an i.i.d. sampler.  Criticality is enforced by
rescaling the service distribution so that f(0) * E[S] = 1; the arrival
model is never rescaled.

Sorted arrival clocks are generated in O(n) via exponential spacings:
E_(i) = sum_{s<=i} E_s / (n - s + 1) is the i-th order statistic of n
unit exponentials, and T_(i) = F^{-1}(1 - exp(-E_(i))).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np
from scipy.special import erf


class ModelError(ValueError):
    """Raised for ill-formed model parameters or impossible requests."""


# ---------------------------------------------------------------------------
# Arrival models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ArrivalModel:
    """Base class; subclasses declare f0, f0_prime and contact_order analytically."""

    kind = "Abstract"

    @property
    def f0(self) -> float:
        raise NotImplementedError

    @property
    def f0_prime(self) -> float:
        raise NotImplementedError

    @property
    def contact_order(self) -> Optional[int]:
        raise NotImplementedError

    def cdf(self, t):
        raise NotImplementedError

    def pdf(self, t):
        raise NotImplementedError

    def ppf(self, p):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class Exponential(ArrivalModel):
    rate: float = 1.0
    kind = "Exponential"

    def __post_init__(self):
        if self.rate <= 0:
            raise ModelError(f"Exponential rate must be > 0, got {self.rate}")

    @property
    def f0(self) -> float:
        return self.rate

    @property
    def f0_prime(self) -> float:
        return -self.rate ** 2

    @property
    def contact_order(self) -> int:
        return 1

    def cdf(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= 0, 0.0, -np.expm1(-self.rate * t))

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t < 0, 0.0, self.rate * np.exp(-self.rate * t))

    def ppf(self, p):
        p = np.asarray(p, dtype=float)
        return -np.log1p(-p) / self.rate

    def to_json(self) -> dict:
        return {"kind": self.kind, "rate": self.rate}


@dataclass(frozen=True)
class Hyperexponential(ArrivalModel):
    """Mixture of exponentials: with probability p_i the clock is Exp(rate_i)."""

    weights: tuple = (0.5, 0.5)
    rates: tuple = (1.0, 1.0)
    kind = "Hyperexponential"

    def __post_init__(self):
        w = tuple(float(v) for v in self.weights)
        r = tuple(float(v) for v in self.rates)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "rates", r)
        if len(w) != len(r) or not w:
            raise ModelError("weights and rates must be equal-length, nonempty")
        if any(v <= 0 for v in w) or any(v <= 0 for v in r):
            raise ModelError("weights and rates must be positive")
        if abs(sum(w) - 1.0) > 1e-12:
            raise ModelError(f"weights must sum to 1, got {sum(w)}")

    @property
    def f0(self) -> float:
        return float(sum(p * lam for p, lam in zip(self.weights, self.rates)))

    @property
    def f0_prime(self) -> float:
        return float(-sum(p * lam ** 2 for p, lam in zip(self.weights, self.rates)))

    @property
    def contact_order(self) -> int:
        return 1

    def cdf(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        tp = np.maximum(t, 0.0)
        for p, lam in zip(self.weights, self.rates):
            out = out - p * np.expm1(-lam * tp)
        return np.where(t <= 0, 0.0, out)

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for p, lam in zip(self.weights, self.rates):
            out = out + p * lam * np.exp(-lam * np.maximum(t, 0.0))
        return np.where(t < 0, 0.0, out)

    def ppf(self, p):
        return _ppf_bisect(self.cdf, p, rate_hint=min(self.rates))

    def to_json(self) -> dict:
        return {"kind": self.kind, "weights": list(self.weights), "rates": list(self.rates)}


@dataclass(frozen=True)
class HalfNormal(ArrivalModel):
    """|Z| for Z ~ Normal(0, scale^2); f'(0) = 0, f''(0) < 0, so contact order 2."""

    scale: float = 1.0
    kind = "HalfNormal"

    def __post_init__(self):
        if self.scale <= 0:
            raise ModelError(f"HalfNormal scale must be > 0, got {self.scale}")

    @property
    def f0(self) -> float:
        return math.sqrt(2.0) / (self.scale * math.sqrt(math.pi))

    @property
    def f0_prime(self) -> float:
        return 0.0

    @property
    def contact_order(self) -> int:
        return 2

    def cdf(self, t):
        t = np.asarray(t, dtype=float)
        return np.where(t <= 0, 0.0, erf(np.maximum(t, 0.0) / (self.scale * math.sqrt(2.0))))

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        val = self.f0 * np.exp(-t * t / (2.0 * self.scale ** 2))
        return np.where(t < 0, 0.0, val)

    def ppf(self, p):
        return _ppf_bisect(self.cdf, p, rate_hint=self.f0)

    def to_json(self) -> dict:
        return {"kind": self.kind, "scale": self.scale}


@dataclass(frozen=True)
class Uniform(ArrivalModel):
    """Uniform on [0, 1].  f(t)*E[S] - 1 vanishes identically under criticality,
    so no finite contact order exists; contact_order is None and scaling
    operations that need a finite order reject this model.
    """

    kind = "Uniform"

    @property
    def f0(self) -> float:
        return 1.0

    @property
    def f0_prime(self) -> float:
        return 0.0

    @property
    def contact_order(self) -> Optional[int]:
        return None

    def cdf(self, t):
        t = np.asarray(t, dtype=float)
        return np.clip(t, 0.0, 1.0)

    def pdf(self, t):
        t = np.asarray(t, dtype=float)
        return np.where((t >= 0) & (t <= 1), 1.0, 0.0)

    def ppf(self, p):
        return np.asarray(p, dtype=float)

    def to_json(self) -> dict:
        return {"kind": self.kind}


def _ppf_bisect(cdf: Callable, p, rate_hint: float = 1.0, tol: float = 1e-12):
    """Vectorized inverse CDF by bisection; safe for any monotone CDF.

    The bracket [0, hi] is grown by doubling until F(hi) covers max(p);
    bisection then runs to absolute tolerance `tol`.
    """
    p = np.asarray(p, dtype=float)
    if np.any((p < 0) | (p > 1)):
        raise ModelError("probabilities must lie in [0, 1]")
    pmax = float(np.max(p, initial=0.0))
    hi = max(1.0, 1.0 / rate_hint)
    while float(cdf(hi)) < min(pmax, 1.0 - 1e-16) and hi < 1e12:
        hi *= 2.0
    lo_v = np.zeros_like(p)
    hi_v = np.full_like(p, hi)
    n_iter = max(1, int(math.ceil(math.log2(hi / tol))))
    for _ in range(n_iter):
        mid = 0.5 * (lo_v + hi_v)
        less = cdf(mid) < p
        lo_v = np.where(less, mid, lo_v)
        hi_v = np.where(less, hi_v, mid)
    return 0.5 * (lo_v + hi_v)


# ---------------------------------------------------------------------------
# Service models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ServiceModel:
    """Service requirement S with declared moments and an i.i.d. sampler.

    kind is one of "Deterministic", "Exponential", "Custom".  Custom models
    supply sampler(rng, size) and declared moments; both built-in kinds
    derive their moments from the parameters.
    """

    kind: str
    mean: float
    second_moment: float
    sampler: Optional[Callable] = field(default=None, compare=False)

    def __post_init__(self):
        if self.mean <= 0:
            raise ModelError(f"service mean must be > 0, got {self.mean}")
        if not math.isfinite(self.second_moment):
            raise ModelError("second moment must be finite (heavy tails unsupported)")
        if self.second_moment < self.mean ** 2 - 1e-12:
            raise ModelError("second moment violates Jensen: E[S^2] >= E[S]^2")
        if self.kind == "Custom" and self.sampler is None:
            raise ModelError("Custom service model requires a sampler")

    @staticmethod
    def deterministic(value: float) -> "ServiceModel":
        return ServiceModel("Deterministic", value, value ** 2)

    @staticmethod
    def exponential(mean: float) -> "ServiceModel":
        return ServiceModel("Exponential", mean, 2.0 * mean ** 2)

    @staticmethod
    def custom(sampler: Callable, mean: float, second_moment: float) -> "ServiceModel":
        return ServiceModel("Custom", mean, second_moment, sampler)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        """i.i.d. draws; size may be an int or a shape tuple."""
        if self.kind == "Deterministic":
            return np.full(size, self.mean)
        if self.kind == "Exponential":
            return rng.exponential(self.mean, size)
        return np.asarray(self.sampler(rng, size), dtype=float)

    def scaled(self, gamma: float) -> "ServiceModel":
        """Replace S by gamma*S (mean scales by gamma, second moment by gamma^2)."""
        if gamma <= 0:
            raise ModelError(f"scale factor must be > 0, got {gamma}")
        if self.kind == "Custom":
            base = self.sampler
            wrapped = lambda rng, size: gamma * np.asarray(base(rng, size), dtype=float)
            return ServiceModel("Custom", gamma * self.mean,
                                gamma ** 2 * self.second_moment, wrapped)
        if self.kind == "Deterministic":
            return ServiceModel.deterministic(gamma * self.mean)
        return ServiceModel.exponential(gamma * self.mean)

    def to_json(self) -> dict:
        if self.kind == "Deterministic":
            return {"kind": self.kind, "value": self.mean}
        if self.kind == "Exponential":
            return {"kind": self.kind, "mean": self.mean}
        raise ModelError("Custom service models are not JSON-serializable")


# ---------------------------------------------------------------------------
# Module operations
# ---------------------------------------------------------------------------

def cdf(model: ArrivalModel, t) -> np.ndarray:
    """F_T(t) for t >= 0."""
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ModelError("cdf requires t >= 0")
    return model.cdf(t_arr)


def density_at_zero(model: ArrivalModel):
    """(f(0), f'(0), contact order) as declared analytically per kind."""
    return model.f0, model.f0_prime, model.contact_order


def sample_sorted_clocks(model: ArrivalModel, n: int, rng: np.random.Generator) -> np.ndarray:
    """Order statistics T_(1) <= ... <= T_(n) in O(n), without sorting."""
    if n < 1:
        raise ModelError(f"need n >= 1 clocks, got {n}")
    e_sorted = np.cumsum(rng.exponential(1.0, n) / (n - np.arange(n)))
    u_sorted = -np.expm1(-e_sorted)
    t = np.asarray(model.ppf(u_sorted), dtype=float)
    # bisection resolves ties only to tolerance; renormalize, then assert
    t = np.maximum.accumulate(t)
    if n > 1 and np.any(np.diff(t) < 0):
        raise AssertionError("sorted clock sample is not nondecreasing")
    return t


def sorted_clock_state(n: int):
    """Initial state for incremental sorted-clock generation (see extend_sorted_clocks)."""
    return {"n": n, "i": 0, "e_cum": 0.0}


def extend_sorted_clocks_u(state: dict, count: int, rng: np.random.Generator) -> np.ndarray:
    """Next `count` sorted uniforms U_(i) = F(T_(i)) via exponential spacings.

    Returns fewer than `count` values when the population is exhausted.
    Working on the uniform scale lets callers count arrivals below a time t
    by comparing against F(t), with no inverse-CDF evaluations.
    """
    n, i = state["n"], state["i"]
    take = min(count, n - i)
    if take <= 0:
        return np.empty(0)
    spac = rng.exponential(1.0, take) / (n - i - np.arange(take))
    e = state["e_cum"] + np.cumsum(spac)
    state["e_cum"] = float(e[-1])
    state["i"] = i + take
    return -np.expm1(-e)


def critical_service_scale(arrival: ArrivalModel, service: ServiceModel) -> float:
    """Multiplier gamma such that f(0) * E[gamma * S] = 1."""
    f0 = arrival.f0
    if f0 <= 0:
        raise ModelError("criticality impossible: arrival density vanishes at 0")
    return 1.0 / (f0 * service.mean)


def critically_scaled(arrival: ArrivalModel, service: ServiceModel) -> ServiceModel:
    """Service model rescaled to criticality against `arrival`."""
    return service.scaled(critical_service_scale(arrival, service))


# ---------------------------------------------------------------------------
# JSON round-trip for {"arrival": {...}, "service": {...}}
# ---------------------------------------------------------------------------

_ARRIVAL_KINDS = {"Exponential", "Hyperexponential", "HalfNormal", "Uniform"}


def arrival_from_json(obj: dict) -> ArrivalModel:
    kind = obj.get("kind")
    if kind == "Exponential":
        return Exponential(rate=float(obj["rate"]))
    if kind == "Hyperexponential":
        return Hyperexponential(weights=tuple(obj["weights"]), rates=tuple(obj["rates"]))
    if kind == "HalfNormal":
        return HalfNormal(scale=float(obj["scale"]))
    if kind == "Uniform":
        return Uniform()
    raise ModelError(f"unknown arrival kind {kind!r}; expected one of {sorted(_ARRIVAL_KINDS)}")


def service_from_json(obj: dict) -> ServiceModel:
    kind = obj.get("kind")
    if kind == "Deterministic":
        return ServiceModel.deterministic(float(obj["value"]))
    if kind == "Exponential":
        return ServiceModel.exponential(float(obj["mean"]))
    raise ModelError(f"unknown service kind {kind!r}; expected Deterministic or Exponential")


def models_from_json(obj: dict):
    return arrival_from_json(obj["arrival"]), service_from_json(obj["service"])


def models_to_json(arrival: ArrivalModel, service: ServiceModel) -> dict:
    return {"arrival": arrival.to_json(), "service": service.to_json()}


# ---------------------------------------------------------------------------
# Invariant checks (exercised by the `validate` CLI verb and the test suite)
# ---------------------------------------------------------------------------

def check_arrival_model(model: ArrivalModel, grid_hi: float = 20.0) -> dict:
    """Numerical validation of the declared analytic quantities.

    Returns a dict of named boolean results plus measured values.
    """
    results = {}
    ts = np.linspace(0.0, grid_hi, 512)
    cs = model.cdf(ts)
    results["cdf_nondecreasing"] = bool(np.all(np.diff(cs) >= -1e-14))
    results["cdf_at_zero"] = bool(abs(float(model.cdf(0.0))) < 1e-14)
    results["cdf_total_mass"] = bool(float(model.cdf(grid_hi * 50)) > 1.0 - 1e-6)

    # f(0) from the right-derivative of the CDF
    h = 1e-7
    f0_num = float(model.cdf(h) - model.cdf(0.0)) / h
    results["f0_matches_cdf_slope"] = bool(abs(f0_num - model.f0) <= 1e-6 * max(model.f0, 1e-300))
    results["f0_numeric"] = f0_num

    # f'(0+) by a one-sided second difference of the CDF; truncation bias is
    # 2 f''(0) h, so h = 1e-5 keeps it well inside the 1e-4 budget
    h = 1e-5
    fp_num = float(model.cdf(3 * h) - 2.0 * model.cdf(2 * h) + model.cdf(h)) / h ** 2
    results["f0_prime_matches_fd"] = bool(abs(fp_num - model.f0_prime) <= 1e-4)
    results["f0_prime_numeric"] = fp_num

    # density maximum attained at zero
    dens = model.pdf(np.linspace(0.0, grid_hi, 2048))
    results["density_max_at_zero"] = bool(float(np.max(dens)) <= model.f0 * (1 + 1e-9))

    # contact order: g(t) = f(t) E[S] - 1 with critical E[S] = 1/f(0)
    ell = model.contact_order
    if ell is not None:
        tt = np.linspace(1e-3, 1e-1, 200)
        g = model.pdf(tt) / model.f0 - 1.0
        ratio = np.abs(g) / tt ** ell
        results["contact_ratio_low"] = float(np.min(ratio))
        results["contact_ratio_high"] = float(np.max(ratio))
        results["contact_order_valid"] = bool(np.min(ratio) > 1e-3 and np.max(ratio) < 1e3)
    else:
        results["contact_order_valid"] = True  # no finite order to validate
    return results


def check_service_model(service: ServiceModel, rng: np.random.Generator,
                        n: int = 1_000_000) -> dict:
    """Sample-mean consistency with declared moments (5 standard errors)."""
    s = service.sample(rng, n)
    se = float(np.std(s, ddof=1)) / math.sqrt(n)
    ok_jensen = service.second_moment >= service.mean ** 2 - 1e-12
    if service.kind != "Deterministic":
        ok_jensen = ok_jensen and service.second_moment > service.mean ** 2
    return {
        "mean_within_5se": bool(abs(float(np.mean(s)) - service.mean) <= max(5 * se, 1e-12)),
        "jensen": bool(ok_jensen),
        "sample_mean": float(np.mean(s)),
    }
