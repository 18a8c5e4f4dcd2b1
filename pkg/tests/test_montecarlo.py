"""Graph sampling, estimators, and the determinism contract."""

import math

import numpy as np
import pytest

from ringnet import (
    CostBudgetError,
    EstimateUndefinedError,
    GraphSample,
    ProductKernel,
    UniformWindow,
    chain_count_in_sample,
    discrete_chain_count,
    discrete_mean_degree,
    empirical_clustering,
    empirical_separation_histogram,
    estimate_chain_count,
    estimate_clustering,
    estimate_mean_degree,
    estimate_separation_histogram,
    run_trials,
    sample_graph,
    separation_in_sample,
    trial_seed,
)


def ring_sample(n, edges):
    return GraphSample(shape=(n,), seed=0,
                       edges=np.asarray(sorted(edges), dtype=np.int64).reshape(-1, 2))


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------

def test_sample_deterministic():
    kernel = UniformWindow(0.4, 0.6)
    first = sample_graph(200, kernel, seed=123)
    second = sample_graph(200, kernel, seed=123)
    np.testing.assert_array_equal(first.edges, second.edges)
    third = sample_graph(200, kernel, seed=124)
    assert not np.array_equal(first.edges, third.edges)


def test_sample_zero_kernel_empty():
    sample = sample_graph(64, UniformWindow(0.0, 1.0), seed=5)
    assert sample.edges.shape == (0, 2)


def test_sample_certain_kernel_complete():
    n = 40
    sample = sample_graph(n, UniformWindow(1.0, math.pi), seed=5)
    assert sample.edges.shape[0] == n * (n - 1) // 2
    assert np.all(sample.degrees() == n - 1)


def test_sample_edges_canonical():
    sample = sample_graph(128, UniformWindow(0.5, 0.5), seed=9)
    assert np.all(sample.edges[:, 0] < sample.edges[:, 1])
    as_tuples = set(map(tuple, sample.edges))
    assert len(as_tuples) == sample.edges.shape[0]


def test_sample_respects_window_support():
    n = 128
    kernel = UniformWindow(0.9, 0.4)
    sample = sample_graph(n, kernel, seed=77)
    spans = np.abs(sample.edges[:, 1] - sample.edges[:, 0])
    spans = np.minimum(spans, n - spans)
    max_span = math.floor(0.4 * n / (2.0 * math.pi))
    assert np.all(spans <= max_span)


def test_sample_mean_degree_oracle():
    n = 256
    kernel = UniformWindow(0.5, 0.2)
    estimate = estimate_mean_degree(n, kernel, trials=1000, master_seed=31)
    exact = discrete_mean_degree(n, kernel)
    assert exact == pytest.approx(8.0)
    assert abs(estimate.mean - exact) <= 3.0 * estimate.std_error


def test_sample_torus_shape():
    kernel = ProductKernel((UniformWindow(0.7, 0.9), UniformWindow(0.6, 1.0)))
    sample = sample_graph((12, 10), kernel, seed=3)
    assert sample.n == 120
    assert np.all(sample.edges < 120)
    estimate = estimate_mean_degree((12, 10), kernel, trials=400, master_seed=8)

    # exact discrete degree: sum the product kernel over all grid offsets,
    # then drop the self pair at offset zero
    def axis_sum(count, factor):
        angles = 2.0 * math.pi * np.arange(count) / count
        return float(np.sum(factor.evaluate(angles)))

    expected = (axis_sum(12, kernel.factors[0]) * axis_sum(10, kernel.factors[1])
                - 0.7 * 0.6)
    assert abs(estimate.mean - expected) <= 4.0 * estimate.std_error


# ---------------------------------------------------------------------------
# clustering estimator
# ---------------------------------------------------------------------------

def test_clustering_complete_graph():
    n = 12
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    estimate = empirical_clustering([ring_sample(n, edges)])
    assert estimate.mean == 1.0
    assert estimate.std_error == 0.0


def test_clustering_cycle_graph_triangle_free():
    n = 10
    edges = [(i, (i + 1) % n) for i in range(n)]
    estimate = empirical_clustering([ring_sample(n, sorted(
        (min(a, b), max(a, b)) for a, b in edges))])
    assert estimate.mean == 0.0


def test_clustering_undefined_without_neighbor_pairs():
    with pytest.raises(EstimateUndefinedError):
        empirical_clustering([ring_sample(8, [(0, 1)])])


def test_clustering_matches_closed_form():
    n, p, width = 2048, 0.2, 1.0
    estimate = estimate_clustering(n, UniformWindow(p, width),
                                   trials=8, master_seed=99)

    # exact mean of the pooled estimator on the discrete ring: fraction of
    # distinct in-window offset pairs whose difference is itself in-window
    reach = math.floor(width * n / (2.0 * math.pi))
    offsets = np.r_[np.arange(-reach, 0), np.arange(1, reach + 1)]
    diff = (offsets[:, None] - offsets[None, :]) % n
    diff = np.minimum(diff, n - diff)
    distinct = offsets[:, None] != offsets[None, :]
    discrete = p * np.sum((diff <= reach) & distinct) / np.sum(distinct)
    assert abs(estimate.mean - discrete) <= 3.5 * estimate.std_error

    # the continuum value sits a discretisation step away
    closed = 0.15  # p * 3/4 plateau
    radius = n / (2.0 * math.pi)
    gap_bound = 2.0 * closed / (width * radius)
    assert abs(estimate.mean - closed) <= gap_bound + 3.5 * estimate.std_error


# ---------------------------------------------------------------------------
# chain counts
# ---------------------------------------------------------------------------

def test_chain_count_empty_graph():
    sample = ring_sample(16, [])
    for k in (1, 2, 3):
        assert chain_count_in_sample(sample, 8, k) == 0


def test_chain_count_complete_graph():
    n = 14
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    sample = ring_sample(n, edges)
    assert chain_count_in_sample(sample, 7, 1) == n - 2
    assert chain_count_in_sample(sample, 7, 2) == (n - 2) * (n - 3)
    assert chain_count_in_sample(sample, 7, 3) == (n - 2) * (n - 3) * (n - 4)


def test_chain_count_hand_built():
    # path 0-2-1 plus direct 0-1: one single-intermediate chain, and the
    # direct edge is not a chain
    sample = ring_sample(6, [(0, 1), (0, 2), (1, 2)])
    assert chain_count_in_sample(sample, 1, 1) == 1
    assert chain_count_in_sample(sample, 1, 2) == 0


def test_chain_count_distinct_intermediates_only():
    # 0-2-3-2-1 style revisits must not count as 3-chains
    sample = ring_sample(8, [(0, 2), (2, 3), (1, 3), (2, 4), (1, 4)])
    # simple 2-intermediate chains: 0-2-3-1 and 0-2-4-1
    assert chain_count_in_sample(sample, 1, 2) == 2
    assert chain_count_in_sample(sample, 1, 3) == 0


def test_chain_count_mc_matches_discrete():
    n = 128
    kernel = UniformWindow(0.05, 0.5)
    for k, offset in ((1, 16), (2, 24)):
        estimate = estimate_chain_count(n, kernel, offset, k,
                                        trials=4000, master_seed=55)
        exact = discrete_chain_count(n, kernel, k, offset).reduced
        assert abs(estimate.mean - exact) <= 3.5 * estimate.std_error


def test_chain_count_anchor_invariance():
    n = 128
    kernel = UniformWindow(0.05, 0.5)
    base = estimate_chain_count(n, kernel, 16, 1, trials=2000, master_seed=4)
    moved = estimate_chain_count(n, kernel, 16, 1, trials=2000, master_seed=5,
                                 anchor=37)
    spread = math.hypot(base.std_error, moved.std_error)
    assert abs(base.mean - moved.mean) <= 3.5 * spread


def test_chain_count_budget_guard():
    sample = ring_sample(4, [(0, 1)])
    big = GraphSample(shape=(100_000,), seed=0,
                      edges=np.zeros((0, 2), dtype=np.int64))
    with pytest.raises(CostBudgetError):
        chain_count_in_sample(big, 50_000, 3)
    # small graphs stay affordable
    assert chain_count_in_sample(sample, 2, 3) == 0


# ---------------------------------------------------------------------------
# separation histogram
# ---------------------------------------------------------------------------

def test_separation_direct_link():
    sample = ring_sample(6, [(0, 3)])
    assert separation_in_sample(sample, 3, 4) == 0


def test_separation_two_hops():
    sample = ring_sample(6, [(0, 1), (1, 3)])
    assert separation_in_sample(sample, 3, 4) == 1


def test_separation_unreached():
    sample = ring_sample(6, [(0, 1)])
    assert separation_in_sample(sample, 3, 4) is None


def test_separation_depth_cap():
    chain = [(i, i + 1) for i in range(5)]
    sample = ring_sample(12, chain)
    assert separation_in_sample(sample, 5, 10) == 4
    assert separation_in_sample(sample, 5, 4) == 4
    assert separation_in_sample(sample, 5, 3) is None


def test_histogram_sums_to_one():
    histogram = estimate_separation_histogram(
        128, UniformWindow(0.2, 0.7), offset=10, max_sep=3,
        trials=500, master_seed=21)
    probabilities = histogram.probabilities()
    assert len(probabilities) == 5  # 0..3 plus unreached bucket
    assert math.fsum(probabilities) == 1.0


def test_histogram_empty_graph_unreached():
    histogram = empirical_separation_histogram(
        [ring_sample(16, [])], offset=5, max_sep=3)
    probabilities = histogram.probabilities()
    assert probabilities[-1] == 1.0
    assert all(v == 0.0 for v in probabilities[:-1])


def test_histogram_direct_entry_matches_kernel():
    n = 256
    kernel = UniformWindow(0.3, 1.2)
    trials = 1500
    inside = estimate_separation_histogram(n, kernel, offset=20, max_sep=0,
                                           trials=trials, master_seed=13)
    gap = 2.0 * math.pi * 20 / n
    q_inside = float(kernel.evaluate(gap))
    spread = math.sqrt(q_inside * (1.0 - q_inside) / trials)
    assert abs(inside.probabilities()[0] - q_inside) <= 3.5 * spread
    outside = estimate_separation_histogram(n, kernel, offset=100, max_sep=0,
                                            trials=trials, master_seed=13)
    assert outside.probabilities()[0] == 0.0


def test_histogram_one_hop_small_p_regime():
    n = 256
    kernel = UniformWindow(0.02, 1.0)
    trials = 6000
    offset = round(1.5 * n / (2.0 * math.pi))
    histogram = estimate_separation_histogram(n, kernel, offset, max_sep=1,
                                              trials=trials, master_seed=17)
    observed = histogram.probabilities()[1]
    expected_count = discrete_chain_count(n, kernel, 1, offset).with_exclusion
    predicted = 1.0 - math.exp(-expected_count)
    spread = math.sqrt(max(predicted * (1.0 - predicted), 1e-12) / trials)
    assert abs(observed - predicted) <= 3.5 * spread + expected_count ** 2


# ---------------------------------------------------------------------------
# determinism and aggregation
# ---------------------------------------------------------------------------

def test_trial_seed_pure_function():
    assert trial_seed(42, 0) == trial_seed(42, 0)
    assert trial_seed(42, 0) != trial_seed(42, 1)
    assert trial_seed(42, 0) != trial_seed(43, 0)


def test_run_trials_thread_invariant():
    def worker(seed):
        return seed * 2 + 1

    single = run_trials(worker, 32, master_seed=7, threads=1)
    multi = run_trials(worker, 32, master_seed=7, threads=8)
    assert single == multi


def test_estimates_thread_invariant():
    kernel = UniformWindow(0.3, 0.6)
    a = estimate_clustering(512, kernel, trials=12, master_seed=3, threads=1)
    b = estimate_clustering(512, kernel, trials=12, master_seed=3, threads=8)
    assert a == b
    ha = estimate_separation_histogram(256, kernel, 7, 2, 50, 3, threads=1)
    hb = estimate_separation_histogram(256, kernel, 7, 2, 50, 3, threads=8)
    assert np.array_equal(ha.counts, hb.counts)


def test_std_error_scaling():
    kernel = UniformWindow(0.3, 0.6)
    small = estimate_mean_degree(256, kernel, trials=64, master_seed=11)
    large = estimate_mean_degree(256, kernel, trials=1024, master_seed=11)
    ratio = small.std_error / large.std_error
    assert 2.0 < ratio < 8.0  # expect about 4 with statistical slack


def test_sample_budget_guard():
    with pytest.raises(CostBudgetError):
        sample_graph(1 << 22, UniformWindow(0.5, math.pi), seed=1)
