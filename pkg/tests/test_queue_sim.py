import math

import numpy as np
import pytest
from scipy.stats import ks_2samp

from transitq.distributions import (Exponential, Hyperexponential, ServiceModel,
                                    critically_scaled)
from transitq.queue_sim import (HeavyTrafficConfig, simulate_delta_queue,
                                simulate_embedded_exponential,
                                simulate_embedded_general, first_busy_period,
                                sample_busy_periods, embedded_exponential_batch,
                                embedded_general_batch, PopulationExhausted,
                                CENSORED, ARRIVAL, DEPARTURE)

UNIT_EXP = ServiceModel.exponential(1.0)


def test_config_derived_quantities():
    cfg = HeavyTrafficConfig(n=1000, beta=1.0, ell=1, q=1.0)
    assert float(cfg.alpha) == pytest.approx(2.0 / 3.0)
    assert cfg.service_multiplier == pytest.approx((1 + 1000 ** (-1 / 3)) / 1000)
    assert cfg.initial_queue == 10
    cfg2 = HeavyTrafficConfig(n=10000, beta=1.0, ell=2, q=1.0)
    assert cfg2.initial_queue == math.ceil(10000 ** 0.4)
    assert HeavyTrafficConfig(n=100, q=2.0).initial_queue == 10   # ceil(9.28)


def test_single_customer_path():
    cfg = HeavyTrafficConfig(n=1, beta=0.0, q=0.0)
    path = simulate_delta_queue(cfg, Exponential(1.0), UNIT_EXP,
                                np.random.default_rng(0))
    assert list(path.kinds) == [ARRIVAL, DEPARTURE]
    assert list(path.levels) == [1, 0]
    t1, t2 = path.times
    assert t2 > t1 > 0
    assert path.served_count == 1


def test_single_initial_customer_busy_period_is_service():
    cfg = HeavyTrafficConfig(n=1, beta=0.0, q=0.5)  # initial queue of ceil(0.5)
    assert cfg.initial_queue == 1
    path = simulate_delta_queue(cfg, Exponential(1e-6), UNIT_EXP,
                                np.random.default_rng(3))
    # arrival clocks are huge, so the busy period is the first service time
    deps = path.times[path.kinds == DEPARTURE]
    assert first_busy_period(path) == pytest.approx(deps[0])


def test_first_busy_period_requires_initial_level():
    cfg = HeavyTrafficConfig(n=5, beta=0.0, q=0.0)
    path = simulate_delta_queue(cfg, Exponential(1.0), UNIT_EXP,
                                np.random.default_rng(0))
    with pytest.raises(ValueError):
        first_busy_period(path)


def test_level_changes_by_one_and_nonnegative():
    cfg = HeavyTrafficConfig(n=200, beta=0.5, q=1.0)
    path = simulate_delta_queue(cfg, Exponential(1.0), UNIT_EXP,
                                np.random.default_rng(1))
    steps = np.diff(np.concatenate([[0], path.levels]))
    assert set(np.unique(steps)) <= {-1, 1}
    assert np.all(path.levels >= 0)
    assert path.levels[-1] == 0  # drain-all ends empty
    assert path.served_count == 200 + cfg.initial_queue


def test_horizon_censoring():
    cfg = HeavyTrafficConfig(n=50, beta=0.0, q=1.0)
    path = simulate_delta_queue(cfg, Exponential(1.0),
                                ServiceModel.deterministic(1.0),
                                np.random.default_rng(2), horizon=1e-4)
    assert first_busy_period(path) == CENSORED


def test_embedded_zero_steps():
    cfg = HeavyTrafficConfig(n=10, beta=0.0, q=0.0)
    ep = simulate_embedded_exponential(cfg, 1.0, UNIT_EXP, 0,
                                       np.random.default_rng(0))
    assert len(ep.A) == 0 and len(ep.Q) == 1
    assert np.all(ep.busy_starts == 0)


def test_embedded_reflection_and_busy_start_identities():
    rng_master = np.random.default_rng(55)
    for trial in range(120):
        n = int(rng_master.integers(20, 800))
        beta = float(rng_master.uniform(-2.0, 2.0))
        q = float(rng_master.choice([0.0, 0.0, 1.0]))
        steps = int(rng_master.integers(1, max(2, min(n // 3, 120))))
        cfg = HeavyTrafficConfig(n=n, beta=beta, q=q)
        seed = int(rng_master.integers(0, 2 ** 32))
        if trial % 2 == 0:
            ep = simulate_embedded_exponential(cfg, 1.0, UNIT_EXP, steps,
                                               np.random.default_rng(seed))
        else:
            ep = simulate_embedded_general(cfg, Exponential(1.0), UNIT_EXP,
                                           steps, np.random.default_rng(seed))
        runmin = np.minimum.accumulate(np.minimum(ep.N, 0))
        assert np.array_equal(ep.Q, ep.N - runmin)
        assert np.array_equal(ep.busy_starts, -runmin)
        assert np.all(np.diff(ep.virtual_idle_cum) >= -1e-15)


def test_embedded_recursions():
    cfg = HeavyTrafficConfig(n=500, beta=0.3, q=0.0)
    ep = simulate_embedded_exponential(cfg, 1.0, UNIT_EXP, 80,
                                       np.random.default_rng(8))
    for k in range(1, 81):
        assert ep.N[k] == ep.N[k - 1] + ep.A[k - 1] - 1
        assert ep.Q[k] == max(ep.Q[k - 1] + ep.A[k - 1] - 1, 0)


def test_population_exhausted():
    cfg = HeavyTrafficConfig(n=4, beta=0.0, q=0.0)
    with pytest.raises(PopulationExhausted):
        simulate_embedded_exponential(cfg, 1.0, ServiceModel.deterministic(1e-9),
                                      20, np.random.default_rng(0))


def test_embedded_equivalence_ks():
    """For exponential clocks the fixed-clock and redrawn-clock embedded
    models coincide in law (two-sample KS on Q at step 50)."""
    cfg = HeavyTrafficConfig(n=1000, beta=0.0, q=0.0)
    qa = embedded_exponential_batch(cfg, 1.0, UNIT_EXP, 50, 10000,
                                    np.random.default_rng(21),
                                    record_steps=[50])["Q"][:, 0]
    qb = embedded_general_batch(cfg, Exponential(1.0), UNIT_EXP, 50, 10000,
                                np.random.default_rng(22),
                                record_steps=[50])["Q"][:, 0]
    assert ks_2samp(qa, qb).pvalue > 0.01


def test_batch_matches_single_path_law():
    cfg = HeavyTrafficConfig(n=400, beta=0.5, q=0.0)
    batch = embedded_general_batch(cfg, Hyperexponential((0.2, 0.8), (2.0, 0.75)),
                                   UNIT_EXP, 40, 4000,
                                   np.random.default_rng(31),
                                   record_steps=[40])["Q"][:, 0]
    singles = np.array([
        simulate_embedded_general(cfg, Hyperexponential((0.2, 0.8), (2.0, 0.75)),
                                  UNIT_EXP, 40, np.random.default_rng(s)).Q[-1]
        for s in range(800)])
    assert ks_2samp(batch, singles).pvalue > 0.01


def test_monotone_coupling_in_beta():
    """Shared stream + inverse-transform binomial: raising beta never
    lowers any arrival count."""
    cfg_kwargs = dict(n=200, q=0.0)
    for seed in range(10):
        prev = None
        for beta in (0.0, 0.5, 1.0):
            cfg = HeavyTrafficConfig(beta=beta, **cfg_kwargs)
            ep = simulate_embedded_exponential(cfg, 1.0, UNIT_EXP, 30,
                                               np.random.default_rng(seed))
            if prev is not None:
                assert np.all(ep.A >= prev)
            prev = ep.A


def test_virtual_idle_vanishes_with_n():
    def scaled_idle(n, reps):
        cfg = HeavyTrafficConfig(n=n, beta=0.0, q=0.0)
        k = int(n ** (2.0 / 3.0))
        tot = 0.0
        for s in range(reps):
            ep = simulate_embedded_exponential(cfg, 1.0, UNIT_EXP, k,
                                               np.random.default_rng(1000 + s))
            tot += ep.virtual_idle_cum[-1]
        return n ** (1.0 / 3.0) * tot / reps

    small = scaled_idle(1000, 60)
    large = scaled_idle(100000, 60)
    assert large < small


def test_determinism_bit_identical():
    cfg = HeavyTrafficConfig(n=300, beta=1.0, q=1.0)
    a = simulate_delta_queue(cfg, Exponential(1.0), UNIT_EXP,
                             np.random.default_rng(77))
    b = simulate_delta_queue(cfg, Exponential(1.0), UNIT_EXP,
                             np.random.default_rng(77))
    assert np.array_equal(a.times, b.times)
    assert np.array_equal(a.levels, b.levels)
    assert a.first_busy_period == b.first_busy_period
    ep1 = simulate_embedded_general(cfg, Exponential(1.0), UNIT_EXP, 30,
                                    np.random.default_rng(78))
    ep2 = simulate_embedded_general(cfg, Exponential(1.0), UNIT_EXP, 30,
                                    np.random.default_rng(78))
    assert np.array_equal(ep1.Q, ep2.Q)
    assert np.array_equal(ep1.virtual_idle_cum, ep2.virtual_idle_cum)
    bp1 = sample_busy_periods(cfg, Exponential(1.0), UNIT_EXP, 50,
                              np.random.SeedSequence(12))
    bp2 = sample_busy_periods(cfg, Exponential(1.0), UNIT_EXP, 50,
                              np.random.SeedSequence(12))
    assert np.array_equal(bp1, bp2)


def test_fast_sampler_agrees_with_event_simulation():
    cfg = HeavyTrafficConfig(n=2000, beta=1.0, q=1.0)
    arr = Hyperexponential((0.2, 0.8), (2.0, 0.75))
    svc = critically_scaled(arr, UNIT_EXP)
    fast = sample_busy_periods(cfg, arr, svc, 3000, np.random.SeedSequence(5))
    slow = []
    for s in range(500):
        path = simulate_delta_queue(cfg, arr, svc, np.random.default_rng(s))
        slow.append(first_busy_period(path))
    slow = np.array(slow)
    se = math.sqrt(fast.var() / len(fast) + slow.var() / len(slow))
    assert abs(fast.mean() - slow.mean()) < 4 * se
    assert ks_2samp(fast, slow).pvalue > 0.01


def test_total_idle_accounting():
    cfg = HeavyTrafficConfig(n=30, beta=0.0, q=0.0)
    path = simulate_delta_queue(cfg, Exponential(1.0),
                                ServiceModel.deterministic(1.0),
                                np.random.default_rng(9))
    # server busy time = served * D; span = last departure; idle fills the rest
    d = cfg.service_multiplier * 1.0
    deps = path.times[path.kinds == DEPARTURE]
    assert path.total_idle == pytest.approx(deps[-1] - path.served_count * d,
                                            abs=1e-9)
