"""Closed form vs marginalization, sampling, exact TV, path removal."""

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latent_ising import (
    CorrelationVector,
    DimensionMismatch,
    EmptySample,
    LeafDistribution,
    TooLarge,
    TreeTopology,
    WeightedForest,
    WeightedTree,
    closed_form_distribution,
    closed_form_prob,
    correlations,
    exact_tv,
    marginal_distribution,
    marginalize_prob,
    path_removed,
    random_weighted_tree,
    read_samples,
    sample,
    write_samples,
)
from latent_ising.distribution import _parity, config_index
from latent_ising.estimation import confidence_radius, empirical_correlations

from conftest import caterpillar, four_leaf_example, philox, random_model


def brute_force_prob(tree: WeightedTree, x) -> float:
    """Enumerate internal spin assignments directly from the edge factors."""
    topo = tree.topology
    internals = sorted(v for v in topo.nodes if not topo.is_leaf(v))
    spins = dict(zip(topo.leaves, x))
    total = 0.0
    for assign in itertools.product((-1, 1), repeat=len(internals)):
        spins.update(zip(internals, assign))
        prob = 0.5
        for u, v in topo.edges:
            prob *= (1.0 + tree.weight(u, v) * spins[u] * spins[v]) / 2.0
        total += prob
    return total


class TestClosedForm:
    def test_single_edge(self):
        topo = TreeTopology([1, 2], [(1, 2)])
        alpha = CorrelationVector.from_pairs([1, 2], {(1, 2): 0.5})
        assert closed_form_prob(topo, alpha, (1, 1)) == pytest.approx(0.375)

    def test_zero_vector_is_uniform(self):
        topo = caterpillar(5)
        alpha = CorrelationVector(range(1, 6), np.zeros(10))
        for x in ((1, 1, 1, 1, 1), (1, -1, 1, -1, 1)):
            assert closed_form_prob(topo, alpha, x) == pytest.approx(1 / 32)

    def test_four_leaf_value_against_spin_enumeration(self):
        wt = four_leaf_example()
        alpha = correlations(wt)
        got = closed_form_prob(wt.topology, alpha, (1, 1, 1, 1))
        assert got == pytest.approx(0.14765625)
        assert got == pytest.approx(brute_force_prob(wt, (1, 1, 1, 1)))

    def test_dimension_mismatch(self):
        wt = four_leaf_example()
        with pytest.raises(DimensionMismatch):
            closed_form_prob(wt.topology, correlations(wt), (1, 1, 1))


class TestMarginalization:
    def test_single_edge(self):
        wt = WeightedTree(TreeTopology([1, 2], [(1, 2)]), {(1, 2): 0.5})
        assert marginalize_prob(wt, (1, 1)) == pytest.approx(0.375)

    def test_perfect_correlation(self):
        topo = caterpillar(4)
        wt = WeightedTree(topo, {e: 1.0 for e in topo.edges})
        assert marginalize_prob(wt, (1, 1, 1, 1)) == pytest.approx(0.5)
        assert marginalize_prob(wt, (1, 1, -1, 1)) == pytest.approx(0.0)

    def test_four_leaf_value(self):
        assert marginalize_prob(four_leaf_example(), (1, 1, 1, 1)) == pytest.approx(
            0.14765625
        )

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6))
    def test_agrees_with_closed_form_and_enumeration(self, seed):
        rng = philox(seed)
        n = int(rng.integers(2, 7))
        wt = random_weighted_tree(n, rng, -1.0, 1.0)
        alpha = correlations(wt)
        table_closed = closed_form_distribution(wt.topology, alpha)
        table_marg = marginal_distribution(wt)
        np.testing.assert_allclose(table_closed, table_marg, atol=1e-12)
        x = tuple(int(s) for s in rng.choice((-1, 1), size=n))
        assert marginalize_prob(wt, x) == pytest.approx(
            brute_force_prob(wt, x), abs=1e-12
        )

    def test_distribution_type_checks_clamping(self):
        wt = four_leaf_example()
        dist = LeafDistribution.from_model(wt)
        assert dist.prob((1, 1, 1, 1)) == pytest.approx(0.14765625)
        assert dist.probabilities.sum() == pytest.approx(1.0)


class TestSampling:
    def test_unit_weights_freeze_rows(self):
        topo = caterpillar(5)
        wt = WeightedTree(topo, {e: 1.0 for e in topo.edges})
        draws = sample(wt, 64, 3)
        assert np.all(draws.min(axis=1) == draws.max(axis=1))

    def test_zero_weights_match_hoeffding_band(self):
        topo = caterpillar(6)
        wt = WeightedTree(topo, {e: 0.0 for e in topo.edges})
        m = 20000
        draws = sample(wt, m, 5)
        report = empirical_correlations(draws, 0.01)
        band = confidence_radius(6, 0.01, m)
        assert float(np.max(np.abs(report.alpha_hat.values))) <= band

    def test_same_seed_same_matrix(self):
        wt = random_model(6, philox(8))
        a = sample(wt, 100, 42)
        b = sample(wt, 100, 42)
        assert np.array_equal(a, b)
        c = sample(wt, 100, 43)
        assert not np.array_equal(a, c)

    def test_forest_sampling_is_independent_across_components(self):
        left = WeightedTree(TreeTopology([1, 2], [(1, 2)]), {(1, 2): 1.0})
        right = WeightedTree(TreeTopology([3, 4], [(3, 4)]), {(3, 4): 1.0})
        draws = sample(WeightedForest([left, right]), 4000, 9)
        assert np.all(draws[:, 0] == draws[:, 1])
        assert np.all(draws[:, 2] == draws[:, 3])
        cross = float(np.mean(draws[:, 0] * draws[:, 2]))
        assert abs(cross) < 0.1

    def test_empirical_frequencies_match_exact_distribution(self):
        wt = random_model(4, philox(14), magnitude=(0.2, 0.9), signed=True)
        m = 200_000
        draws = sample(wt, m, 6)
        indices = np.zeros(m, dtype=np.int64)
        for k in range(4):
            indices |= ((draws[:, k] > 0).astype(np.int64)) << k
        empirical = np.bincount(indices, minlength=16) / m
        exact = marginal_distribution(wt)
        # four-sigma band per cell at this sample size
        band = 4.0 * np.sqrt(np.clip(exact * (1 - exact), 1e-12, None) / m)
        assert np.all(np.abs(empirical - exact) <= band + 1e-3)

    def test_empty_sample_rejected(self):
        with pytest.raises(EmptySample):
            sample(four_leaf_example(), 0, 1)

    def test_file_round_trip(self, tmp_path):
        wt = random_model(5, philox(10))
        draws = sample(wt, 37, 2)
        path = tmp_path / "draws.dat"
        write_samples(path, draws)
        text = path.read_text()
        assert text.splitlines()[0] == "# n=5 m=37"
        assert np.array_equal(read_samples(path), draws)


class TestExactTv:
    def test_identical_models(self):
        wt = four_leaf_example()
        assert exact_tv(wt, wt) == pytest.approx(0.0)

    def test_two_leaf_difference(self):
        topo = TreeTopology([1, 2], [(1, 2)])
        a = CorrelationVector.from_pairs([1, 2], {(1, 2): 0.5})
        b = CorrelationVector.from_pairs([1, 2], {(1, 2): 0.6})
        assert exact_tv((topo, a), (topo, b)) == pytest.approx(0.05)

    def test_chain_vs_uniform_three_leaves(self):
        topo = TreeTopology([1, 2, 3], [(1, 4), (2, 4), (3, 4)])
        chain = WeightedTree(topo, {e: 1.0 for e in topo.edges})
        uniform = WeightedTree(topo, {e: 0.0 for e in topo.edges})
        # enumeration: the chain puts 1/2 on each constant configuration
        table = marginal_distribution(chain)
        expected = 0.5 * np.abs(table - 1.0 / 8).sum()
        assert expected == pytest.approx(0.75)
        assert exact_tv(chain, uniform) == pytest.approx(0.75)

    def test_too_large_guard(self):
        topo = TreeTopology(range(1, 16), [(k, 16) for k in range(1, 16)])
        wt = WeightedTree(topo, {e: 0.0 for e in topo.edges})
        with pytest.raises(TooLarge):
            exact_tv(wt, wt)

    def test_forest_table_marginalizes_componentwise(self):
        left = WeightedTree(TreeTopology([1, 3], [(1, 3)]), {(1, 3): 0.5})
        right = WeightedTree(TreeTopology([2, 4], [(2, 4)]), {(2, 4): -0.25})
        forest = WeightedForest([left, right])
        dist = LeafDistribution.from_model(forest)
        # P(x1=x3=+1) * P(x2=x4=+1) with interleaved labels
        x = (1, 1, 1, 1)
        assert dist.prob(x) == pytest.approx(0.375 * (1 - 0.25) / 4)


class TestPathRemoved:
    def test_cherry_pair_removal(self):
        wt = four_leaf_example()
        alpha = correlations(wt)
        gamma = path_removed(alpha, wt.topology, (1, 2))
        assert gamma.get(3, 4) == alpha.get(3, 4)
        for pair in ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4)):
            assert gamma.get(*pair) == 0.0

    def test_quartet_removal_keeps_outside_pairs(self):
        topo = caterpillar(6)
        wt = WeightedTree(topo, {e: 0.5 for e in topo.edges})
        alpha = correlations(wt)
        gamma = path_removed(alpha, topo, (1, 2, 3, 4))
        assert gamma.get(5, 6) == alpha.get(5, 6)
        assert gamma.get(1, 5) == 0.0

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 10**6))
    def test_one_coordinate_difference_identity(self, seed):
        rng = philox(seed)
        n = int(rng.integers(3, 8))
        topo = random_model(n, rng).topology
        alpha = CorrelationVector(range(1, n + 1), rng.uniform(-1, 1, n * (n - 1) // 2))
        i, j = sorted(int(v) for v in rng.choice(range(1, n + 1), 2, replace=False))
        beta = alpha.replace({(i, j): float(rng.uniform(-1, 1))})
        gamma = path_removed(alpha, topo, (i, j))
        fa = closed_form_distribution(topo, alpha)
        fb = closed_form_distribution(topo, beta)
        fg = closed_form_distribution(topo, gamma)
        masks = np.arange(2 ** n)
        pos = {leaf: k for k, leaf in enumerate(topo.leaves)}
        pair_mask = (1 << pos[i]) | (1 << pos[j])
        chi = 1.0 - 2.0 * _parity(~masks & pair_mask)
        np.testing.assert_allclose(
            fa - fb, chi * (alpha.get(i, j) - beta.get(i, j)) * fg, atol=1e-12
        )


def test_config_index_orders_by_sorted_leaf():
    topo = TreeTopology([2, 5, 9], [(2, 10), (5, 10), (9, 10)])
    assert config_index(topo, (1, -1, 1)) == 0b101
