import math

import numpy as np
import pytest

from transitq.distributions import (Exponential, Hyperexponential, HalfNormal,
                                    Uniform, ServiceModel, ModelError, cdf,
                                    density_at_zero, sample_sorted_clocks,
                                    critical_service_scale, critically_scaled,
                                    check_arrival_model, check_service_model,
                                    models_from_json, models_to_json)
from transitq.stats import ks_distance

HYP = Hyperexponential((0.2, 0.8), (2.0, 0.75))
HALF = HalfNormal(math.sqrt(math.pi / 2.0))


def test_cdf_origin_and_total_mass():
    for model in (Exponential(1.0), HYP, HALF, Uniform()):
        assert float(cdf(model, 0.0)) == 0.0
        assert float(cdf(model, 1e6 if model.kind != "Uniform" else 1.0)) == pytest.approx(1.0, abs=1e-9)


def test_hyperexponential_cdf_closed_form():
    # mixture value computed independently: 0.2(1-e^-2) + 0.8(1-e^-0.75)
    expected = 0.2 * (1.0 - math.exp(-2.0)) + 0.8 * (1.0 - math.exp(-0.75))
    assert float(cdf(HYP, 1.0)) == pytest.approx(expected, rel=1e-14)
    assert expected == pytest.approx(0.5950397011598657, rel=1e-12)


def test_cdf_rejects_negative_time():
    with pytest.raises(ModelError):
        cdf(Exponential(1.0), -0.5)


def test_density_at_zero_triples():
    assert density_at_zero(Exponential(1.0)) == (1.0, -1.0, 1)
    f0, fp, ell = density_at_zero(HYP)
    assert f0 == pytest.approx(1.0, rel=1e-14)      # 0.2*2 + 0.8*0.75
    assert fp == pytest.approx(-1.25, rel=1e-14)    # -(0.2*4 + 0.8*0.5625)
    assert ell == 1
    f0, fp, ell = density_at_zero(HALF)
    assert f0 == pytest.approx(2.0 / math.pi, rel=1e-14)
    assert fp == 0.0
    assert ell == 2
    assert density_at_zero(Uniform()) == (1.0, 0.0, None)


def test_sorted_clocks_single_draw_is_exponential():
    rng = np.random.default_rng(0)
    draws = np.array([sample_sorted_clocks(Exponential(1.0), 1, rng)[0]
                      for _ in range(4000)])
    assert ks_distance(draws, lambda t: 1.0 - np.exp(-t)) < 0.03


def test_sorted_clocks_empty_rejected():
    with pytest.raises(ModelError):
        sample_sorted_clocks(Exponential(1.0), 0, np.random.default_rng(0))


def test_sorted_clocks_ks_against_cdf():
    # KS threshold 0.02 at n = 1e4 (1% KS quantile is ~0.016)
    rng = np.random.default_rng(7)
    t = sample_sorted_clocks(Exponential(1.0), 10_000, rng)
    assert ks_distance(t, lambda x: 1.0 - np.exp(-x)) < 0.02


def test_sorted_clocks_uniform_median():
    rng = np.random.default_rng(11)
    t = sample_sorted_clocks(Uniform(), 10_000, rng)
    assert abs(t[5_000] - 0.5) < 0.02


def test_sorted_clocks_nondecreasing_every_seed():
    for seed in range(25):
        for model in (Exponential(2.0), HYP, HALF, Uniform()):
            t = sample_sorted_clocks(model, 500, np.random.default_rng(seed))
            assert np.all(np.diff(t) >= 0)


def test_ppf_round_trip():
    ps = np.linspace(1e-6, 1.0 - 1e-9, 200)
    for model in (HYP, HALF):
        t = np.asarray(model.ppf(ps))
        back = np.asarray(model.cdf(t))
        assert np.max(np.abs(back - ps)) < 1e-9


def test_critical_service_scale():
    unit = ServiceModel.exponential(1.0)
    assert critical_service_scale(Exponential(1.0), unit) == pytest.approx(1.0)
    assert critical_service_scale(HYP, unit) == pytest.approx(1.0, rel=1e-14)
    assert critical_service_scale(HALF, unit) == pytest.approx(math.pi / 2.0, rel=1e-14)
    scaled = critically_scaled(HALF, unit)
    assert scaled.mean == pytest.approx(math.pi / 2.0, rel=1e-14)
    assert scaled.second_moment == pytest.approx(2.0 * (math.pi / 2.0) ** 2, rel=1e-14)


def test_criticality_impossible_error():
    class NoMass(Exponential):
        @property
        def f0(self):
            return 0.0

    with pytest.raises(ModelError):
        critical_service_scale(NoMass(1.0), ServiceModel.exponential(1.0))


def test_jensen_violation_rejected():
    with pytest.raises(ModelError):
        ServiceModel("Custom", 1.0, 0.5, sampler=lambda rng, size: np.ones(size))


def test_deterministic_service_moments():
    s = ServiceModel.deterministic(2.0)
    assert s.second_moment == 4.0
    assert np.all(s.sample(np.random.default_rng(0), 10) == 2.0)


@pytest.mark.parametrize("model", [Exponential(1.0), HYP, HALF], ids=lambda m: m.kind)
def test_arrival_model_invariants(model):
    res = check_arrival_model(model)
    failures = {k: v for k, v in res.items() if isinstance(v, bool) and not v}
    assert not failures, failures


def test_uniform_model_invariants():
    res = check_arrival_model(Uniform(), grid_hi=1.0)
    assert res["cdf_nondecreasing"] and res["f0_matches_cdf_slope"]
    assert res["contact_order_valid"]  # vacuous: no finite order declared


def test_contact_order_ratio_windows():
    # |f(t)/f(0) - 1| / t^ell bounded away from 0 and infinity on [1e-3, 1e-1]
    for model in (Exponential(1.0), HYP, HALF):
        ell = model.contact_order
        tt = np.linspace(1e-3, 1e-1, 200)
        g = model.pdf(tt) / model.f0 - 1.0
        ratio = np.abs(g) / tt ** ell
        assert ratio.min() > 1e-2
        assert ratio.max() < 1e2


def test_service_sample_mean_million_draws():
    res = check_service_model(ServiceModel.exponential(1.0),
                              np.random.default_rng(3), n=1_000_000)
    assert res["mean_within_5se"] and res["jensen"]


def test_json_round_trip():
    blob = models_to_json(HYP, ServiceModel.exponential(1.0))
    assert blob == {"arrival": {"kind": "Hyperexponential",
                                "weights": [0.2, 0.8], "rates": [2.0, 0.75]},
                    "service": {"kind": "Exponential", "mean": 1.0}}
    arr, svc = models_from_json(blob)
    assert arr == HYP
    assert svc.mean == 1.0 and svc.kind == "Exponential"
    blob2 = models_to_json(HALF, ServiceModel.deterministic(1.0))
    arr2, svc2 = models_from_json(blob2)
    assert arr2 == HALF and svc2.kind == "Deterministic"


def test_unknown_kind_rejected():
    with pytest.raises(ModelError):
        models_from_json({"arrival": {"kind": "Weibull", "shape": 2.0},
                          "service": {"kind": "Exponential", "mean": 1.0}})
