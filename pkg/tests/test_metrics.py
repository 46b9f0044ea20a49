import random

import pytest
from hypothesis import given, settings, strategies as st

from somalab import metrics


def _poly(x):
    return sum(x ** d for d in range(7))


def test_effective_bf_exact_integer_roots():
    assert metrics.effective_bf(7) == 1.0
    assert metrics.effective_bf(127) == 2.0
    assert metrics.effective_bf(1093) == 3.0  # sum of 3^d, d=0..6


def test_effective_bf_inverts_the_polynomial():
    for n in (8, 100, 861285, 10**9):
        b = metrics.effective_bf(n)
        assert abs(_poly(b) - n) <= 1e-6 * n


@given(st.integers(min_value=1, max_value=10**12))
@settings(max_examples=200)
def test_effective_bf_monotone(n):
    assert metrics.effective_bf(n + 1) >= metrics.effective_bf(n)


def test_effective_bf_rejects_nonpositive():
    with pytest.raises(ValueError):
        metrics.effective_bf(0)


def test_exhaustive_depth1_is_every_single_placement():
    hist = metrics.exhaustive_branching(1)
    assert sum(hist.values()) == 688


def test_exhaustive_budget_carries_partial_results():
    with pytest.raises(metrics.ResourceLimitError) as err:
        metrics.exhaustive_branching(2, node_budget=200)
    assert isinstance(err.value.partial, dict)


def test_sampling_is_reproducible():
    a = metrics.sample_branching(3, 200, seed=9)
    b = metrics.sample_branching(3, 200, seed=9)
    assert a == b
    assert len(a) == 200
    assert all(g >= 0 for g in a)


def test_configuration_sampler_depth1_matches_exhaustive_mean():
    # depth-1 states are reached uniformly, so the sampled mean must agree
    # with the exact enumeration
    hist = metrics.exhaustive_branching(1)
    exact = sum(k * v for k, v in hist.items()) / sum(hist.values())
    sampled = metrics.sample_branching(1, 4000, seed=11, model="configuration")
    mean = sum(sampled) / len(sampled)
    assert abs(mean - exact) < 5.0


def test_profile_shape_and_conventions():
    profile = metrics.branching_profile(num_samples=2000, seed=1,
                                        ci_resamples=500)
    assert set(profile.per_depth_samples) == set(range(7))
    assert profile.ci95[0] <= profile.overall_mean <= profile.ci95[1]
    # depth 0 out-degree is the number of candidates for the first cell,
    # identical for every walk under the committed model only in mean
    assert profile.per_depth_mean[0] > profile.per_depth_mean[1]
    assert profile.metadata["model"] == "committed"


def test_profile_decays_monotonically():
    profile = metrics.branching_profile(num_samples=4000, seed=2,
                                        ci_resamples=100)
    means = [profile.per_depth_mean[d] for d in range(1, 7)]
    assert all(a > b for a, b in zip(means, means[1:]))


def test_count_based_branching_means():
    # complete binary tree, no dead leaves until the last level
    out = metrics.branching_means_from_counts([2, 4, 0], [0, 0, 8])
    assert out["ratio_mean"] == 2.0
    assert out["skipped_depths"] == []
    # the printed non-leaf-fraction form is a fraction per level
    assert out["nonleaf_fraction_mean"] == pytest.approx(2 / 3)


def test_count_based_means_flag_empty_depths():
    out = metrics.branching_means_from_counts([1, 0, 1], [0, 0, 0])
    assert out["skipped_depths"] == [2]
    with pytest.raises(metrics.DivisionByZeroError):
        metrics.branching_means_from_counts([0, 0], [0, 0])


def test_sampler_validates_arguments():
    with pytest.raises(ValueError):
        metrics.sample_branching(0, 10, seed=1)
    with pytest.raises(ValueError):
        metrics.sample_branching(3, 0, seed=1)
