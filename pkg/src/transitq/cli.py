"""Experiment runner: reproduces the busy-period tables, the density
overlay, and the path-level two-simulator comparison from JSON configs.

Subcommands: table2 | table3 | table4 | density | paths | validate | airy-dump.
Outputs are CSV/JSON files with a `# config_hash=... tool_version=...`
header line; identical (config, seed) pairs produce byte-identical files
regardless of --threads.  Exit codes: 0 ok, 1 validation failure, 2 config
error.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .airy import airy_arrays, branch_discrepancy, _set_branches
from .diffusion import DriftSpec, reflect
from .distributions import (ArrivalModel, ServiceModel, Exponential,
                            Hyperexponential, HalfNormal, Uniform,
                            arrival_from_json, service_from_json,
                            critically_scaled, check_arrival_model,
                            check_service_model, models_to_json)
from .passage import GeneralFptParams, StdFptParams, fpt_general, fpt_density
from .queue_sim import (HeavyTrafficConfig, sample_busy_periods,
                        simulate_delta_queue, simulate_embedded_exponential,
                        simulate_embedded_general, embedded_exponential_batch,
                        embedded_general_batch)
from .scaling import busy_period_scale, criticality_residual, alpha
from .stats import mc_summary, gaussian_kde, ks_distance, relative_error

BATCH = 1000  # replication batch size; fixed so results don't depend on --threads


class ConfigError(Exception):
    pass


@dataclass
class ExperimentConfig:
    seed: int
    replications: int
    n_values: list
    arrival: ArrivalModel
    service: ServiceModel
    beta: float
    q_values: list
    ell: int
    outputs: Path

    def resolved_dict(self) -> dict:
        return {
            "seed": self.seed, "replications": self.replications,
            "n_values": list(self.n_values),
            "model": models_to_json(self.arrival, self.service),
            "beta": self.beta, "q": list(self.q_values), "ell": self.ell,
        }

    def config_hash(self) -> str:
        blob = json.dumps(self.resolved_dict(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:12]


_TABLE_DEFAULTS = {
    "table2": {
        "model": {"arrival": {"kind": "Exponential", "rate": 1.0},
                  "service": {"kind": "Exponential", "mean": 1.0}},
        "n_values": [100, 1000, 10000], "beta": 1.0, "q": [1.0, 2.0], "ell": 1,
    },
    "table3": {
        "model": {"arrival": {"kind": "Hyperexponential",
                              "weights": [0.2, 0.8], "rates": [2.0, 0.75]},
                  "service": {"kind": "Exponential", "mean": 1.0}},
        "n_values": [1000, 10000, 100000], "beta": 1.0, "q": [1.0, 2.0], "ell": 1,
    },
    "table4": {
        "model": {"arrival": {"kind": "HalfNormal", "scale": math.sqrt(math.pi / 2.0)},
                  "service": {"kind": "Exponential", "mean": 1.0}},
        "n_values": [1000, 10000], "beta": 1.0, "q": [1.0, 2.0], "ell": 2,
    },
    "density": {
        "model": {"arrival": {"kind": "Exponential", "rate": 1.0},
                  "service": {"kind": "Exponential", "mean": 1.0}},
        "n_values": [10000], "beta": 1.0, "q": [1.0], "ell": 1,
    },
    "paths": {
        "model": {"arrival": {"kind": "Exponential", "rate": 1.0},
                  "service": {"kind": "Deterministic", "value": 1.0}},
        "n_values": [1000, 10000, 100000], "beta": 1.0, "q": [0.0], "ell": 1,
    },
    "validate": {
        "model": {"arrival": {"kind": "Exponential", "rate": 1.0},
                  "service": {"kind": "Exponential", "mean": 1.0}},
        "n_values": [1000], "beta": 1.0, "q": [1.0], "ell": 1,
    },
}


def _require(cond: bool, path: str, message: str):
    if not cond:
        raise ConfigError(f"{path}: {message}")


def load_config(which: str, config_path, seed, reps, out) -> ExperimentConfig:
    base = dict(_TABLE_DEFAULTS[which])
    user = {}
    if config_path:
        try:
            user = json.loads(Path(config_path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"config: cannot read {config_path}: {exc}")
        _require(isinstance(user, dict), "config", "top level must be an object")
    merged = {**base, **user}
    merged.setdefault("seed", 20240901)
    merged.setdefault("replications", 10000)
    merged.setdefault("outputs", "out")
    if seed is not None:
        merged["seed"] = seed
    if reps is not None:
        merged["replications"] = reps
    if out is not None:
        merged["outputs"] = out

    _require(isinstance(merged["seed"], int) and 0 <= merged["seed"] < 2 ** 64,
             "seed", "must be a 64-bit unsigned integer")
    _require(isinstance(merged["replications"], int) and merged["replications"] >= 1,
             "replications", "must be an integer >= 1")
    _require(isinstance(merged["n_values"], list) and merged["n_values"]
             and all(isinstance(v, int) and v >= 1 for v in merged["n_values"]),
             "n_values", "must be a nonempty list of positive integers")
    _require(isinstance(merged["ell"], int) and merged["ell"] >= 1,
             "ell", "must be a positive integer")
    q = merged["q"]
    if isinstance(q, (int, float)):
        q = [float(q)]
    _require(isinstance(q, list) and q and all(
        isinstance(v, (int, float)) and v >= 0 for v in q),
        "q", "must be a nonnegative number or list of them")
    _require(isinstance(merged["beta"], (int, float)), "beta", "must be a number")
    model = merged["model"]
    _require(isinstance(model, dict) and "arrival" in model and "service" in model,
             "model", "must be an object with arrival and service")
    try:
        arrival = arrival_from_json(model["arrival"])
    except Exception as exc:
        raise ConfigError(f"model.arrival: {exc}")
    try:
        service = service_from_json(model["service"])
    except Exception as exc:
        raise ConfigError(f"model.service: {exc}")
    return ExperimentConfig(
        seed=merged["seed"], replications=merged["replications"],
        n_values=list(merged["n_values"]), arrival=arrival, service=service,
        beta=float(merged["beta"]), q_values=[float(v) for v in q],
        ell=merged["ell"], outputs=Path(merged["outputs"]))


def _write_csv(path: Path, chash: str, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(f"# config_hash={chash} tool_version={__version__}\n")
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow(row)


def _write_json(path: Path, chash: str, payload: dict):
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"config_hash": chash, "tool_version": __version__, **payload}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# busy-period cells (parallelizable work units)
# ---------------------------------------------------------------------------

def _bp_batch(args) -> np.ndarray:
    (model_json, n, beta, q, ell, seed, spawn_key, count) = args
    arrival = arrival_from_json(model_json["arrival"])
    service = critically_scaled(arrival, service_from_json(model_json["service"]))
    cfg = HeavyTrafficConfig(n=n, beta=beta, ell=ell, q=q)
    ss = np.random.SeedSequence(seed, spawn_key=spawn_key)
    return sample_busy_periods(cfg, arrival, service, count, ss)


def _run_units(units, threads: int):
    if threads == 1:
        return [_bp_batch(u) for u in units]
    workers = os.cpu_count() if threads == 0 else threads
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_bp_batch, units))


def collect_busy_periods(cfg: ExperimentConfig, n: int, q: float,
                         cell_index: int, threads: int,
                         replications=None) -> np.ndarray:
    reps = cfg.replications if replications is None else replications
    model_json = models_to_json(cfg.arrival, cfg.service)
    units = []
    b = 0
    done = 0
    while done < reps:
        count = min(BATCH, reps - done)
        units.append((model_json, n, cfg.beta, q, cfg.ell, cfg.seed,
                      (cell_index, b), count))
        done += count
        b += 1
    return np.concatenate(_run_units(units, threads))


def exact_limit_mean(cfg: ExperimentConfig, q: float) -> float:
    """Limit busy-period mean from the first-passage analytics."""
    arrival = cfg.arrival
    service = critically_scaled(arrival, cfg.service)
    f0 = arrival.f0
    k = -arrival.f0_prime
    sigma = f0 ** 1.5 * math.sqrt(service.second_moment)
    params = GeneralFptParams(q, cfg.beta * f0, k, sigma)
    _, mean = fpt_general(params)
    return mean


def run_table(cfg: ExperimentConfig, which: str, threads: int) -> dict:
    chash = cfg.config_hash()
    has_exact = cfg.ell == 1 and cfg.arrival.f0_prime < 0
    rows = []
    report = {"table": which, "cells": []}
    cell = 0
    for q in cfg.q_values:
        exact = exact_limit_mean(cfg, q) if has_exact else None
        for n in cfg.n_values:
            bp = collect_busy_periods(cfg, n, q, cell, threads)
            cell += 1
            scale = busy_period_scale(n, cfg.ell)
            summ = mc_summary(scale * bp)
            rel = relative_error(summ.mean, exact) if exact else ""
            rows.append((q, n, summ.mean, summ.std_error, rel, summ.censored_count))
            report["cells"].append({"q": q, "n": n, **summ.to_json(),
                                    "rel_error": rel if rel != "" else None})
        if exact is not None:
            rows.append((q, "inf", exact, "", "", ""))
            report["cells"].append({"q": q, "n": None, "mean": exact,
                                    "exact": True})
    out = cfg.outputs
    _write_csv(out / f"{which}.csv", chash,
               ("q", "n", "scaled_mean", "std_error", "rel_error", "censored"), rows)
    _write_json(out / f"{which}.json", chash, report)
    return report


# ---------------------------------------------------------------------------
# density overlay
# ---------------------------------------------------------------------------

def run_density(cfg: ExperimentConfig, threads: int, grid_points: int = 200,
                grid_lo: float = 0.02, grid_hi: float = 10.0) -> dict:
    if cfg.ell != 1:
        raise ConfigError("density: requires a contact-order-1 arrival model")
    chash = cfg.config_hash()
    n = cfg.n_values[0]
    q = cfg.q_values[0]
    bp = collect_busy_periods(cfg, n, q, 0, threads)
    scaled = busy_period_scale(n, 1) * bp

    arrival = cfg.arrival
    service = critically_scaled(arrival, cfg.service)
    sigma = arrival.f0 ** 1.5 * math.sqrt(service.second_moment)
    params = GeneralFptParams(q, cfg.beta * arrival.f0, -arrival.f0_prime, sigma)
    density, _ = fpt_general(params)

    grid = np.linspace(grid_lo, grid_hi, grid_points)
    kde = gaussian_kde(scaled, grid)
    analytic = np.asarray(density(grid))
    sup = float(np.max(np.abs(kde - analytic)))
    mass = float(np.trapezoid(analytic, grid))
    rows = list(zip(grid, kde, analytic))
    out = cfg.outputs
    _write_csv(out / "density.csv", chash, ("t", "kde", "analytic"), rows)
    report = {"n": n, "q": q, "replications": len(bp), "sup_distance": sup,
              "analytic_grid_mass": mass}
    _write_json(out / "density.json", chash, report)
    return report


# ---------------------------------------------------------------------------
# path-level comparison against the reflected diffusion
# ---------------------------------------------------------------------------

def _reflected_w_means(spec: DriftSpec, grid: np.ndarray, n_paths: int,
                       dt: float, rng: np.random.Generator):
    steps = int(round(float(grid[-1]) / dt))
    idx = np.minimum(np.round(grid / dt).astype(int), steps)
    sums = np.zeros(len(grid))
    sq = np.zeros(len(grid))
    chunk = max(1, int(2e7 / (steps + 1)))
    done = 0
    t_all = dt * np.arange(steps + 1)
    drift = spec.q + spec.drift(t_all)
    while done < n_paths:
        c = min(chunk, n_paths - done)
        z = rng.standard_normal((c, steps))
        np.cumsum(z, axis=1, out=z)
        w = np.concatenate([np.zeros((c, 1)), spec.sigma * math.sqrt(dt) * z],
                           axis=1) + drift[None, :]
        refl = w - np.minimum.accumulate(np.minimum(w, 0.0), axis=1)
        vals = refl[:, idx]
        sums += vals.sum(axis=0)
        sq += (vals ** 2).sum(axis=0)
        done += c
    mean = sums / n_paths
    var = sq / n_paths - mean ** 2
    return mean, np.sqrt(np.maximum(var, 0.0) / n_paths)


def _paths_cell(args):
    (model_json, n, beta, q, ell, seed, spawn_key, count, grid) = args
    arrival = arrival_from_json(model_json["arrival"])
    service = critically_scaled(arrival, service_from_json(model_json["service"]))
    cfg = HeavyTrafficConfig(n=n, beta=beta, ell=ell, q=q)
    grid = np.asarray(grid)
    n13 = float(n) ** (1.0 / 3.0)
    horizon = float(grid[-1]) / n13 * 1.0001 + 1e-12
    ss = np.random.SeedSequence(seed, spawn_key=spawn_key)
    sums = np.zeros(len(grid))
    sq = np.zeros(len(grid))
    for child in ss.spawn(count):
        rng = np.random.default_rng(child)
        path = simulate_delta_queue(cfg, arrival, service, rng, horizon=horizon)
        idx = np.searchsorted(path.times, grid / n13, side="right") - 1
        lvl = np.where(idx >= 0, path.levels[np.maximum(idx, 0)], cfg.initial_queue)
        vals = lvl / n13
        sums += vals
        sq += vals ** 2
    return sums, sq


def run_paths(cfg: ExperimentConfig, threads: int, grid=None,
              diffusion_paths: int = 200000, dt: float = 1e-3) -> dict:
    chash = cfg.config_hash()
    if grid is None:
        grid = np.arange(0.0, 2.0 + 1e-9, 0.25)
    grid = np.asarray(grid, dtype=float)
    q = cfg.q_values[0]
    arrival = cfg.arrival
    service = critically_scaled(arrival, cfg.service)
    spec = DriftSpec.general_queue(q, cfg.beta, arrival.f0, arrival.f0_prime,
                                   service.second_moment)
    rng = np.random.default_rng(np.random.SeedSequence(cfg.seed, spawn_key=(999,)))
    d_mean, d_se = _reflected_w_means(spec, grid, diffusion_paths, dt, rng)

    model_json = models_to_json(cfg.arrival, cfg.service)
    rows = []
    report = {"grid": grid.tolist(), "diffusion_mean": d_mean.tolist(),
              "per_n": []}
    for ni, n in enumerate(cfg.n_values):
        units = []
        done = 0
        b = 0
        while done < cfg.replications:
            count = min(BATCH, cfg.replications - done)
            units.append((model_json, n, cfg.beta, q, cfg.ell, cfg.seed,
                          (ni, b), count, tuple(grid)))
            done += count
            b += 1
        if threads == 1:
            parts = [_paths_cell(u) for u in units]
        else:
            workers = os.cpu_count() if threads == 0 else threads
            with ProcessPoolExecutor(max_workers=workers) as pool:
                parts = list(pool.map(_paths_cell, units))
        sums = np.sum([p[0] for p in parts], axis=0)
        sq = np.sum([p[1] for p in parts], axis=0)
        mean = sums / cfg.replications
        var = np.maximum(sq / cfg.replications - mean ** 2, 0.0)
        se = np.sqrt(var / cfg.replications)
        for i, t in enumerate(grid):
            rows.append((t, n, mean[i], se[i], d_mean[i], d_se[i],
                         mean[i] - d_mean[i]))
        report["per_n"].append({"n": n, "sim_mean": mean.tolist(),
                                "sim_se": se.tolist(),
                                "gap": (mean - d_mean).tolist()})
    out = cfg.outputs
    _write_csv(out / "paths.csv", chash,
               ("t", "n", "sim_mean", "sim_se", "diffusion_mean",
                "diffusion_se", "gap"), rows)
    _write_json(out / "paths.json", chash, report)
    return report


# ---------------------------------------------------------------------------
# validation suites
# ---------------------------------------------------------------------------

def run_validate(cfg: ExperimentConfig, inject_airy_fault: bool = False) -> dict:
    chash = cfg.config_hash()
    rng = np.random.default_rng(cfg.seed)
    suites = {}

    # arrival/service model analytics
    models = {"Exponential": Exponential(1.0),
              "Hyperexponential": Hyperexponential((0.2, 0.8), (2.0, 0.75)),
              "HalfNormal": HalfNormal(math.sqrt(math.pi / 2.0)),
              "Uniform": Uniform()}
    dist_ok = True
    dist_detail = {}
    for name, model in models.items():
        res = check_arrival_model(model, grid_hi=1.0 if name == "Uniform" else 20.0)
        ok = all(v for k, v in res.items() if isinstance(v, bool))
        dist_detail[name] = {k: v for k, v in res.items()}
        dist_ok &= ok
    svc_res = check_service_model(ServiceModel.exponential(1.0), rng, n=200000)
    dist_ok &= svc_res["mean_within_5se"] and svc_res["jensen"]
    dist_detail["service"] = svc_res
    suites["distributions"] = {"ok": bool(dist_ok), "detail": dist_detail}

    # airy kernel
    if inject_airy_fault:
        _set_branches(ai_series_max=1.0, bi_series_max=1.0,
                               neg_series_min=-1.0, ai_march_max=1.5)
    try:
        xs = np.linspace(-8.0, 8.0, 200)
        a, b, ap, bp = airy_arrays(xs)
        wr = np.abs((a * bp - ap * b) * np.pi - 1.0)
        wron_ok = bool(np.max(wr) < 1e-10)
        h = 1e-4
        xs2 = np.linspace(-5.0, 5.0, 101)
        am, bm = airy_arrays(xs2 - h)[0:2]
        a0, b0 = airy_arrays(xs2)[0:2]
        apl, bpl = airy_arrays(xs2 + h)[0:2]
        res_ai = np.abs((am - 2 * a0 + apl) / h ** 2 - xs2 * a0)
        res_bi = np.abs((bm - 2 * b0 + bpl) / h ** 2 - xs2 * b0)
        ode_ok = bool(max(np.max(res_ai), np.max(res_bi)) < 1e-4)
        disc = branch_discrepancy()
        overlap_ok = bool(max(disc.values()) <= 1e-9)
        suites["airy"] = {"ok": wron_ok and ode_ok and overlap_ok,
                          "wronskian_max_rel": float(np.max(wr)),
                          "ode_residual_max": float(max(np.max(res_ai), np.max(res_bi))),
                          "branch_overlap": disc}
    except Exception as exc:  # corrupted branch points may break evaluation outright
        suites["airy"] = {"ok": False, "error": str(exc)}
    finally:
        if inject_airy_fault:
            _set_branches()

    # reflection / embedded identities
    ok_embed = True
    svc = ServiceModel.exponential(1.0)
    for trial in range(60):
        n = int(rng.integers(50, 2000))
        beta = float(rng.uniform(-1.5, 1.5))
        steps = int(rng.integers(1, min(n // 2, 200)))
        c = HeavyTrafficConfig(n=n, beta=beta, q=0.0)
        ep = simulate_embedded_exponential(c, 1.0, svc, steps, np.random.default_rng(trial))
        refl = ep.N - np.minimum.accumulate(np.minimum(ep.N, 0))
        ok_embed &= bool(np.array_equal(ep.Q, refl))
        ok_embed &= bool(np.array_equal(ep.busy_starts,
                                        -np.minimum.accumulate(np.minimum(ep.N, 0))))
    suites["embedded_identities"] = {"ok": bool(ok_embed), "trials": 60}

    # criticality residual
    arr = cfg.arrival
    svc_c = critically_scaled(arr, cfg.service)
    resid = criticality_residual(arr, svc_c, 1000, cfg.beta, cfg.ell)
    resid_raw = criticality_residual(HalfNormal(math.sqrt(math.pi / 2.0)),
                                     ServiceModel.exponential(1.0), 1000, 0.0, 2)
    suites["criticality"] = {
        "ok": bool(abs(resid) < 1e-12 and abs(resid_raw - (2 / math.pi - 1.0)) < 1e-12),
        "scaled_residual": resid, "unscaled_halfnormal_residual": resid_raw}

    # exponential vs general embedded equivalence (two-sample KS)
    from scipy.stats import ks_2samp
    c = HeavyTrafficConfig(n=1000, beta=0.0, q=0.0)
    qa = embedded_exponential_batch(c, 1.0, svc, 50, 4000,
                                    np.random.default_rng(cfg.seed + 1),
                                    record_steps=[50])["Q"][:, 0]
    qb = embedded_general_batch(c, Exponential(1.0), svc, 50, 4000,
                                np.random.default_rng(cfg.seed + 2),
                                record_steps=[50])["Q"][:, 0]
    ks = ks_2samp(qa, qb)
    suites["embedded_equivalence"] = {"ok": bool(ks.pvalue > 0.01),
                                      "ks_stat": float(ks.statistic),
                                      "p_value": float(ks.pvalue)}

    ok = all(s["ok"] for s in suites.values())
    report = {"ok": ok, "suites": suites}
    _write_json(cfg.outputs / "validate.json", chash, report)
    return report


def run_airy_dump(cfg: ExperimentConfig, lo: float, hi: float, count: int) -> dict:
    chash = cfg.config_hash()
    xs = np.linspace(lo, hi, count)
    a, b, ap, bp = airy_arrays(xs)
    _write_csv(cfg.outputs / "airy.csv", chash,
               ("x", "Ai", "Bi", "Ai_prime", "Bi_prime"),
               zip(xs, a, b, ap, bp))
    return {"points": count}


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="transitq",
        description="Finite-population queue experiments and first-passage analytics")
    parser.add_argument("verb", choices=["table2", "table3", "table4", "density",
                                         "paths", "validate", "airy-dump"])
    parser.add_argument("--config", default=None, help="JSON config path")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--reps", type=int, default=None)
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker processes; 0 = all cores")
    parser.add_argument("--inject-airy-fault", action="store_true",
                        help="debug: corrupt the Airy branch points during validate")
    parser.add_argument("--airy-range", default="-10:10:201",
                        help="airy-dump grid as lo:hi:count")
    args = parser.parse_args(argv)

    try:
        which = "validate" if args.verb == "airy-dump" else args.verb
        cfg = load_config(which if which in _TABLE_DEFAULTS else "validate",
                          args.config, args.seed, args.reps, args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    try:
        if args.verb in ("table2", "table3", "table4"):
            report = run_table(cfg, args.verb, args.threads)
            for cell in report["cells"]:
                if cell.get("exact"):
                    print(f"q={cell['q']} n=inf  mean={cell['mean']:.4f} (analytic)")
                else:
                    print(f"q={cell['q']} n={cell['n']}  mean={cell['mean']:.4f} "
                          f"se={cell['std_error']:.4f}")
        elif args.verb == "density":
            report = run_density(cfg, args.threads)
            print(f"sup|kde - analytic| = {report['sup_distance']:.4f} "
                  f"(grid mass {report['analytic_grid_mass']:.4f})")
        elif args.verb == "paths":
            report = run_paths(cfg, args.threads)
            for per_n in report["per_n"]:
                print(f"n={per_n['n']}: max |gap| = "
                      f"{max(abs(g) for g in per_n['gap']):.4f}")
        elif args.verb == "validate":
            report = run_validate(cfg, inject_airy_fault=args.inject_airy_fault)
            for name, suite in report["suites"].items():
                print(f"{name}: {'ok' if suite['ok'] else 'FAIL'}")
            if not report["ok"]:
                return 1
        elif args.verb == "airy-dump":
            try:
                lo, hi, count = args.airy_range.split(":")
                lo, hi, count = float(lo), float(hi), int(count)
            except ValueError:
                print("config error: --airy-range must be lo:hi:count", file=sys.stderr)
                return 2
            run_airy_dump(cfg, lo, hi, count)
            print(f"wrote {count} rows to {cfg.outputs / 'airy.csv'}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
