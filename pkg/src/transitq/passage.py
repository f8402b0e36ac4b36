"""First-passage analytics for Brownian motion with parabolic drift.

For W_q(t) = q + beta*t - t^2/2 + sigma*B(t) started at q > 0, the time of
the first crossing of zero has the closed-form density

    f_q(t) = exp(-((t-beta)^3 + beta^3)/(6 sigma^2) - beta*x)
             * int_R e^{t u} [B(u)A(u-x) - A(u)B(u-x)]
                       / (pi (A(u)^2 + B(u)^2)) du,

with c = (2 sigma^2)^{1/3}, x = q/sigma^2, A(u) = Ai(c u), B(u) = Bi(c u).
A general parabolic coefficient -k/2 (k > 0) reduces to the standard form
by the time change t -> k^{-2/3} t together with (q, a) -> (q k^{1/3},
a k^{-1/3}); the noise scale is unchanged.

The u-integrand decays superexponentially on both sides: e^{tu} kills the
left tail, the ratio Ai(c(u-x))/Bi(cu) the right tail.  On the left the
raw Airy factors oscillate fast, but their cross product only carries the
slow difference phase zeta(c|u-x|) - zeta(c|u|) ~ c^{3/2} x sqrt(|u|),
so panels can widen as sqrt(|u|)/x far out; the adaptive pass cleans up
whatever the initial mesh misjudges.

The tail expansion P(T >= x) ~ (3 sigma sqrt(x)/sqrt(2 pi))
  * exp(-F3(x)/(6 sigma^2)) / F3'(x) with
  F3(x) = (x-beta)^3 - x^3/4 - 3 q x + beta^3 + 6 beta q
is implemented verbatim as an approximation for the limiting hitting time
at level x; its constant is cross-checked against the quadrature tail.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .airy import airy_arrays
from .quadrature import adaptive_gk, QuadratureError

__all__ = [
    "StdFptParams", "GeneralFptParams", "fpt_density", "fpt_mass_mean",
    "fpt_mean", "fpt_general", "fpt_tail_mass", "f3", "f3_prime",
    "tail_probability", "QuadratureError",
]

_EXP_FLOOR = -46.0  # e^{-46} ~ 1e-20: truncation level for all envelopes


@dataclass(frozen=True)
class StdFptParams:
    """Parameters of W_q(t) = q + beta*t - t^2/2 + sigma*B(t)."""

    q: float
    beta: float
    sigma: float
    c_const: float = field(init=False)
    x: float = field(init=False)

    def __post_init__(self):
        if self.q <= 0:
            raise ValueError(f"initial level q must be > 0, got {self.q}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")
        s2 = self.sigma ** 2
        object.__setattr__(self, "c_const", (2.0 * s2) ** (1.0 / 3.0))
        object.__setattr__(self, "x", self.q / s2)


@dataclass(frozen=True)
class GeneralFptParams:
    """Parameters of W(t) = q + a*t - (k/2)*t^2 + sigma*B(t), k > 0.

    For an arrival density f with f'(0) < 0 the busy-period limit uses
    a = beta*f(0), k = |f'(0)|, sigma^2 = f(0)^3 * E[S^2].
    """

    q: float
    a: float
    k: float
    sigma: float

    def __post_init__(self):
        if self.k <= 0:
            raise ValueError(
                f"parabolic magnitude k must be > 0 (requires f'(0) < 0), got {self.k}")
        if self.q <= 0:
            raise ValueError(f"initial level q must be > 0, got {self.q}")
        if self.sigma <= 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")

    def to_standard(self) -> tuple:
        """(StdFptParams, time_scale) with T_general = time_scale^{-1} * T_std."""
        k3 = self.k ** (1.0 / 3.0)
        return StdFptParams(self.q * k3, self.a / k3, self.sigma), self.k ** (2.0 / 3.0)


# ---------------------------------------------------------------------------
# density
# ---------------------------------------------------------------------------

def _t_floor(p: StdFptParams) -> float:
    """Below this time the density is < ~1e-24 and is returned as 0."""
    guard = 0.2 * p.q / max(abs(p.beta), 1e-9)
    return min(p.q ** 2 / (187.0 * p.sigma ** 2), guard)


def _zeta(z):
    return (2.0 / 3.0) * np.asarray(z) ** 1.5


def _u_upper(p: StdFptParams, t: float) -> float:
    """Smallest u beyond which e^{tu} Ai(c(u-x))/Bi(cu) is below e^{EXP_FLOOR}."""
    c, x = p.c_const, p.x
    u = x + 1.0
    while t * u - float(_zeta(c * u)) - float(_zeta(c * (u - x))) > _EXP_FLOOR:
        u += 0.5
        if c * u > 95.0:
            raise QuadratureError(
                f"u-integral upper bound exceeds the Airy domain at t={t}",
                achieved=math.inf)
    return u


def _u_edges(p: StdFptParams, t: float) -> np.ndarray:
    """Initial panel mesh over [u_lo, u_hi], oscillation- and decay-aware."""
    c, x = p.c_const, p.x
    u_hi = _u_upper(p, t)
    u_lo = _EXP_FLOOR / t - 5.0
    c32 = c ** 1.5
    u_far = max(8.0 / c, 2.0 * x)

    edges = [0.0]
    u = 0.0
    while u > u_lo:  # downward mesh
        au = abs(u)
        if au < u_far:
            w = min(math.pi / (c32 * math.sqrt(au + 0.3)), 0.5)
        else:
            # slow cross-product phase: half period ~ pi sqrt(|u|) / (c^{3/2} x)
            w = min(math.pi * math.sqrt(au) / (c32 * max(x, 1e-3)), 2.5 / t, 60.0)
        u -= max(w, 1e-3)
        edges.append(max(u, u_lo))
    edges = edges[::-1]
    u = 0.0
    while u < u_hi:  # upward mesh
        w = min(0.5 * (1.0 + u / 8.0), max(2.5 / t, 0.05))
        u += w
        edges.append(min(u, u_hi))
    return np.array(edges)


def _u_integrand(p: StdFptParams, t: float):
    c, x = p.c_const, p.x
    u_split = x + 1.0

    def f(u: np.ndarray) -> np.ndarray:
        out = np.empty_like(u)
        lo = u < u_split
        if lo.any():
            ul = u[lo]
            ai_u, bi_u, _, _ = airy_arrays(c * ul)
            ai_ux, bi_ux, _, _ = airy_arrays(c * (ul - x))
            num = bi_u * ai_ux - ai_u * bi_ux
            den = np.pi * (ai_u * ai_u + bi_u * bi_u)
            out[lo] = np.exp(t * ul) * num / den
        hi = ~lo
        if hi.any():
            uh = u[hi]
            ai_u, bi_u, _, _ = airy_arrays(c * uh)
            ai_ux, bi_ux, _, _ = airy_arrays(c * (uh - x))
            log_bi = np.log(bi_u)
            t1 = np.exp(t * uh + np.log(ai_ux) - log_bi)
            t2 = np.exp(t * uh + np.log(ai_u * bi_ux) - 2.0 * log_bi)
            r = ai_u / bi_u
            out[hi] = (t1 - t2) / (np.pi * (1.0 + r * r))
        return out

    return f


def _density_scalar(p: StdFptParams, t: float,
                    epsabs: float = 1e-11, epsrel: float = 5e-9) -> float:
    if t <= _t_floor(p):
        return 0.0
    s2 = p.sigma ** 2
    pref_log = -((t - p.beta) ** 3 + p.beta ** 3) / (6.0 * s2) - p.beta * p.x
    val, _ = adaptive_gk(_u_integrand(p, t), _u_edges(p, t),
                         epsabs=epsabs, epsrel=epsrel)
    return max(float(np.exp(pref_log) * val), 0.0)


def fpt_density(p: StdFptParams, t) -> np.ndarray | float:
    """Density of the zero-crossing time at t > 0 (scalar or array)."""
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0):
        raise ValueError("fpt_density needs t > 0")
    out = np.array([_density_scalar(p, float(ti)) for ti in t_arr])
    return float(out[0]) if np.isscalar(t) or np.asarray(t).shape == () else out


# ---------------------------------------------------------------------------
# mass / mean / tail integrals over t
# ---------------------------------------------------------------------------

def _t_upper(p: StdFptParams) -> float:
    """Time beyond which the exponential prefactor is below e^{EXP_FLOOR}."""
    s2 = p.sigma ** 2
    t = p.beta + (max(-_EXP_FLOOR * 6.0 * s2 - p.beta ** 3
                      - 6.0 * s2 * p.beta * p.x, 1.0)) ** (1.0 / 3.0)
    return max(t, _t_floor(p) * 4.0 + 1.0)


def _t_mesh(lo: float, hi: float, n: int = 24) -> np.ndarray:
    return np.linspace(lo, hi, n)


def fpt_mass_mean(p: StdFptParams, epsabs: float = 5e-7) -> tuple:
    """(total mass, mean) of the crossing-time density by one adaptive pass."""
    lo, hi = _t_floor(p) * 1.0001, _t_upper(p)

    def integrand(ts: np.ndarray) -> np.ndarray:
        f = np.array([_density_scalar(p, float(t)) for t in ts])
        return np.stack([f, ts * f], axis=1)

    (mass, mean), _ = adaptive_gk(integrand, _t_mesh(lo, hi),
                                  epsabs=epsabs, epsrel=1e-7, max_panels=900)
    return float(mass), float(mean)


def fpt_mean(p: StdFptParams) -> float:
    """Mean zero-crossing time, by quadrature of t * f(t)."""
    return fpt_mass_mean(p)[1]


def fpt_tail_mass(p: StdFptParams, t_lo: float, t_hi: float | None = None) -> float:
    """P(T >= t_lo) by quadrature; default upper cut adds ~2.5 units past t_lo."""
    if t_hi is None:
        t_hi = max(t_lo + 2.5, _t_upper(p))

    def integrand(ts: np.ndarray) -> np.ndarray:
        return np.array([_density_scalar(p, float(t)) for t in ts])

    val, _ = adaptive_gk(integrand, _t_mesh(t_lo, t_hi, 12),
                         epsabs=1e-16, epsrel=1e-6, max_panels=600)
    return float(val)


def fpt_general(p: GeneralFptParams) -> tuple:
    """(density callable, mean) for a general parabolic coefficient -k/2."""
    std, scale = p.to_standard()

    def density(t):
        return scale * fpt_density(std, np.asarray(t) * scale)

    return density, fpt_mean(std) / scale


# ---------------------------------------------------------------------------
# tail asymptotics
# ---------------------------------------------------------------------------

def f3(x, q: float, beta: float):
    """Cubic exponent of the tail expansion."""
    x = np.asarray(x, dtype=float)
    out = (x - beta) ** 3 - 0.25 * x ** 3 - 3.0 * q * x + beta ** 3 + 6.0 * beta * q
    return float(out) if out.shape == () else out


def f3_prime(x, q: float, beta: float):
    x = np.asarray(x, dtype=float)
    out = 3.0 * (x - beta) ** 2 - 0.75 * x ** 2 - 3.0 * q
    return float(out) if out.shape == () else out


def tail_probability(q: float, beta: float, sigma: float, x: float) -> float:
    """Asymptotic P(T >= x) for large x; relative error O(1/x).

    Valid only where F3'(x) > 0; outside that region the expansion is
    meaningless and an error is raised.
    """
    fp = f3_prime(x, q, beta)
    if fp <= 0:
        raise ValueError(
            f"x={x} is outside the asymptotic regime: F3'(x)={fp} <= 0")
    return (3.0 * sigma * math.sqrt(x) / math.sqrt(2.0 * math.pi)
            * math.exp(-f3(x, q, beta) / (6.0 * sigma ** 2)) / fp)
