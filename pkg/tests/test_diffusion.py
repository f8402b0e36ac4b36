import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from transitq.diffusion import (DriftSpec, simulate_w, reflect,
                                hitting_time_zero, sample_hitting_times,
                                CENSORED)


def test_deterministic_skeleton():
    spec = DriftSpec(2.0, 1.0, -0.5, 2, 1e-12)
    path = simulate_w(spec, 3.0, 0.01, np.random.default_rng(0))
    t = path.times()
    assert np.max(np.abs(path.values - (2.0 + t - 0.5 * t ** 2))) < 1e-9


def test_mean_and_variance_at_one():
    spec = DriftSpec(0.0, 1.0, -0.5, 2, 1.0)
    rng = np.random.default_rng(1)
    finals = np.array([simulate_w(spec, 1.0, 0.05, rng).values[-1]
                       for _ in range(4000)])
    se_mean = finals.std(ddof=1) / math.sqrt(len(finals))
    assert abs(finals.mean() - 0.5) < 3 * se_mean
    var = finals.var(ddof=1)
    se_var = var * math.sqrt(2.0 / (len(finals) - 1))
    assert abs(var - 1.0) < 3 * se_var


def test_reflect_examples():
    assert list(reflect([1.0, -1.0, 2.0])) == [1.0, 0.0, 3.0]
    x = np.array([0.3, 0.1, 2.0, 0.0])
    assert np.array_equal(reflect(x), x)
    t = np.linspace(0, 5, 40)
    assert np.max(np.abs(reflect(-t))) == 0.0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.floats(-50, 50, allow_nan=False), min_size=1, max_size=60),
       st.floats(0.1, 40.0))
def test_reflect_laws(values, c0):
    f = np.array(values)
    r = reflect(f)
    assert np.all(r >= -1e-12)
    assert np.all(r >= f - 1e-12)
    assert np.allclose(reflect(r), r)
    g = f - np.min(np.minimum(f, 0.0)) + c0  # strictly nonnegative shift
    assert np.allclose(reflect(g), g)


def test_hitting_time_deterministic_roots():
    spec = DriftSpec(1.0, 0.0, -0.5, 2, 1e-12)
    path = simulate_w(spec, 5.0, 1e-3, np.random.default_rng(0))
    assert hitting_time_zero(path) == pytest.approx(math.sqrt(2.0), abs=2e-3)
    spec = DriftSpec(1.0, 1.0, -0.5, 2, 1e-12)
    path = simulate_w(spec, 6.0, 1e-3, np.random.default_rng(0))
    assert hitting_time_zero(path) == pytest.approx(1.0 + math.sqrt(3.0), abs=2e-3)


def test_hitting_requires_positive_start():
    path = simulate_w(DriftSpec(0.0, 1.0, -0.5, 2, 1.0), 1.0, 0.01,
                      np.random.default_rng(0))
    with pytest.raises(ValueError):
        hitting_time_zero(path)


def test_censoring_marker():
    spec = DriftSpec(5.0, 0.0, -0.01, 2, 1e-12)
    path = simulate_w(spec, 1.0, 0.01, np.random.default_rng(0))
    assert hitting_time_zero(path) == CENSORED


def test_batch_sampler_matches_single_path_law():
    spec = DriftSpec(1.0, 1.0, -0.5, 2, 1.0)
    rng = np.random.default_rng(5)
    taus = sample_hitting_times(spec, 4000, 1e-3, rng)
    taus = taus[np.isfinite(taus)]
    singles = []
    rng2 = np.random.default_rng(6)
    for _ in range(400):
        t = hitting_time_zero(simulate_w(spec, spec.default_horizon(), 1e-3, rng2))
        if np.isfinite(t):
            singles.append(t)
    se = math.sqrt(np.var(taus) / len(taus) + np.var(singles) / len(singles))
    assert abs(np.mean(taus) - np.mean(singles)) < 4 * se


def test_depletion_direction():
    # stronger parabolic pull lowers the reflected mean at t = 2
    rng_means = []
    for c in (-0.25, -0.5, -1.0):
        spec = DriftSpec(0.0, 1.0, c, 2, 1.0)
        rng = np.random.default_rng(9)
        vals = []
        for _ in range(800):
            path = simulate_w(spec, 2.0, 0.01, rng)
            vals.append(reflect(path.values)[-1])
        rng_means.append(np.mean(vals))
    assert rng_means[0] > rng_means[1] > rng_means[2]
    assert rng_means[2] > 0


def test_grid_refinement_stability():
    spec = DriftSpec(1.0, 1.0, -0.5, 2, 1.0)
    means = {}
    for dt in (4e-3, 2e-3, 1e-3):
        taus = sample_hitting_times(spec, 20000, dt,
                                    np.random.default_rng(12345))
        means[dt] = float(np.mean(taus[np.isfinite(taus)]))
    d42 = abs(means[4e-3] - means[2e-3])
    d21 = abs(means[2e-3] - means[1e-3])
    # O(sqrt(dt)) bias: successive halvings shrink the step change
    assert d21 < d42 * 1.5 + 0.01


def test_invalid_arguments():
    with pytest.raises(ValueError):
        DriftSpec(1.0, 1.0, -0.5, 1, 1.0)
    with pytest.raises(ValueError):
        DriftSpec(1.0, 1.0, -0.5, 2, 0.0)
    with pytest.raises(ValueError):
        simulate_w(DriftSpec(1.0, 0.0, -0.5, 2, 1.0), 1.0, 0.0,
                   np.random.default_rng(0))


def test_factories_match_limit_forms():
    s = DriftSpec.exponential_queue(1.0, 0.5, 2.0, 3.0)
    assert (s.q, s.a, s.c, s.m) == (1.0, 1.0, -2.0, 2)
    assert s.sigma == pytest.approx(2.0 ** 1.5 * math.sqrt(3.0))
    g = DriftSpec.general_queue(1.0, 1.0, 1.0, -1.25, 2.0)
    assert (g.a, g.c) == (1.0, -0.625)
    assert g.sigma == pytest.approx(math.sqrt(2.0))
    e = DriftSpec.embedded_general(0.5, 1.0, -1.25, 2.0)
    assert (e.q, e.a, e.c) == (0.0, 0.5, -0.625)
    assert e.sigma == pytest.approx(math.sqrt(2.0))
