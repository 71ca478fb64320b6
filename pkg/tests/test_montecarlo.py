import math

import numpy as np
import pytest

from syncap.channel import ChannelParams, apply_channel, sample_realization, segment_lengths
from syncap.montecarlo import (Estimate, McConfig, boundary_ambiguity_trial,
                               estimate_ab_entropy_rate, estimate_boundary_ambiguity,
                               estimate_length_biased_log_run, estimate_output_length,
                               estimate_zv_stats)

from oracles import h2

A1 = 1.2885312757793885


def test_config_validation():
    with pytest.raises(ValueError):
        McConfig(1.0, 10, 1)
    with pytest.raises(ValueError):
        McConfig(0.1, 0, 1)
    with pytest.raises(ValueError, match="budget"):
        McConfig(0.1, 10**6, 1000, budget=10**8)
    McConfig(0.1, 10**6, 100, budget=10**8)


def test_estimate_from_samples():
    e = Estimate.from_samples([1.0, 2.0, 3.0])
    assert e.mean == 2.0 and e.samples == 3
    assert e.std == pytest.approx(1.0)
    assert e.within(2.5, 1.0) and not e.within(3.5, 1.0)
    assert Estimate.from_samples([4.0]).std_error == 0.0


@pytest.mark.parametrize("estimator", [
    estimate_ab_entropy_rate, estimate_output_length, estimate_zv_stats,
    estimate_boundary_ambiguity, estimate_length_biased_log_run,
])
def test_deterministic_across_workers(estimator):
    base = McConfig(0.05, 20_000, 6, seed=123)
    one = estimator(base)
    many = estimator(McConfig(0.05, 20_000, 6, seed=123, workers=3))
    assert one == many
    assert estimator(McConfig(0.05, 20_000, 6, seed=124)) != one


def test_ab_entropy_rate():
    est = estimate_ab_entropy_rate(McConfig(0.1, 200_000, 10, seed=1))
    assert est.within(h2(0.1) + 0.1, 5)


def test_output_length_and_its_spread():
    n, alpha = 1000, 0.2
    est = estimate_output_length(McConfig(alpha, n, 2000, seed=2))
    assert est.within(alpha, 5)
    # binomial spread of the per-trial excess
    assert est.std == pytest.approx(math.sqrt(alpha * (1 - alpha) / n), rel=0.1)


def test_zv_frequencies_scale_quadratically():
    z = estimate_zv_stats(McConfig(0.01, 10**6, 10, seed=3))
    z2 = estimate_zv_stats(McConfig(0.02, 10**6, 10, seed=3))
    for e in z:
        assert e.mean <= 3 * 0.01**2 + 3 * e.std_error
    ratio = (z2[0].mean + z2[1].mean) / (z[0].mean + z[1].mean)
    assert ratio == pytest.approx(4.0, rel=0.2)
    # the reversed inserted bits are fair coins
    assert z[0].mean == pytest.approx(z[1].mean, rel=0.25)


def test_zv_vanishes_without_crowding():
    z = estimate_zv_stats(McConfig(0.0, 1000, 3))
    assert z[0].mean == z[1].mean == 0.0


def _segment_ambiguity_oracle(x, a, b):
    """Brute force over placements: count outputs reachable with identical y
    but different K for one interior pair, used on tiny hand-built cases."""
    from syncap.channel import InsertionRealization
    r = InsertionRealization(a, b)
    y = apply_channel(x, r).tolist()
    n = len(x)
    ks = {}
    for i in range(n):
        for v in (0, 1):
            pat = [0] * n
            val = [0] * n
            pat[i], val[i] = 1, v
            alt = InsertionRealization(pat, val)
            if apply_channel(x, alt).tolist() == y:
                k = tuple(segment_lengths(x, alt).tolist())
                ks[k] = ks.get(k, 0) + 1
    return ks


def test_boundary_trial_hand_cases():
    # runs 1 | 0 | 11 | 0 | 1 ; one inserted 1 after the first bit of run 2
    x = np.array([1, 0, 1, 1, 0, 1], dtype=np.uint8)
    a = np.array([0, 0, 1, 0, 0, 0], dtype=np.uint8)
    b = a.copy()
    total, pairs = boundary_ambiguity_trial(x, a, b)
    assert pairs == 2
    # the inserted 1 can sit after the last bit of run 1 or after either bit of
    # run 2: one placement gives K(run 1) + 1, two give K(run 2) + 1
    ks = _segment_ambiguity_oracle(x, a, b)
    assert sorted(ks.values()) == [1, 2]
    assert total == pytest.approx(h2(1 / 3))
    # an inserted 0 inside run 2 changes y and is not ambiguous
    b0 = np.zeros(6, dtype=np.uint8)
    assert boundary_ambiguity_trial(x, a, b0)[0] == 0.0
    # fewer than four runs: no interior pair
    assert boundary_ambiguity_trial(x[:3], a[:3], b[:3]) == (0.0, 0)


def test_boundary_ambiguity_per_pair_and_per_symbol():
    cfg = McConfig(0.003, 10**6, 8, seed=4)
    pair = estimate_boundary_ambiguity(cfg, per="pair")
    symbol = estimate_boundary_ambiguity(cfg, per="symbol")
    assert pair.mean == pytest.approx(A1, rel=0.05)
    # interior run pairs make up half the positions of an iid word
    assert symbol.mean == pytest.approx(A1 / 2, rel=0.05)
    assert estimate_boundary_ambiguity(McConfig(0.0, 100, 2)).samples == 0
    with pytest.raises(ValueError):
        estimate_boundary_ambiguity(cfg, per="run")


def test_length_biased_log_run():
    est = estimate_length_biased_log_run(McConfig(0.0, 10**6, 5, seed=5))
    assert est.mean == pytest.approx(1.2886, rel=0.01)
    zeros = estimate_length_biased_log_run(McConfig(0.0, 1024, 1), mode="zeros")
    assert zeros.mean == pytest.approx(10.0)
    alt = estimate_length_biased_log_run(McConfig(0.0, 1024, 1), mode="alternating")
    assert alt.mean == 0.0
    with pytest.raises(ValueError):
        estimate_length_biased_log_run(McConfig(0.0, 10, 1), mode="ones")


def test_sampler_agrees_with_estimator_streams():
    # the channel sampler and the estimators draw the same insertion law
    r = sample_realization(10**6, ChannelParams(0.1, seed=9))
    est = estimate_output_length(McConfig(0.1, 10**6, 1, seed=9))
    assert abs(r.count / 10**6 - est.mean) < 5 * math.sqrt(0.1 * 0.9 / 10**6) * 2
