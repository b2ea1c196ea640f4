"""Known-topology weight fitting."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latent_ising import (
    CorrelationVector,
    EmptySample,
    NoConsistentModel,
    TreeTopology,
    WeightedTree,
    correlations,
    exact_tv,
    fit_known,
    fit_report,
    learn_from_samples_known,
    sample,
)

from conftest import philox, random_model, three_leaf_star

STAR = TreeTopology([1, 2, 3], [(1, 4), (2, 4), (3, 4)])


class TestFitKnown:
    def test_exact_targets_reproduced(self):
        truth = random_model(8, philox(11), magnitude=(0.3, 0.9), signed=True)
        alpha = correlations(truth)
        fit = fit_known(truth.topology, alpha, 1e-6)
        induced = correlations(fit.tree)
        assert alpha.max_abs_difference(induced) <= 1e-6 + 1e-9
        assert exact_tv(truth, fit.tree) <= 2 * 8 ** 2 * 2e-6

    def test_mixed_signs_recovered_everywhere(self):
        truth = random_model(7, philox(12), magnitude=(0.5, 0.95), signed=True)
        alpha = correlations(truth)
        fit = fit_known(truth.topology, alpha, 1e-6)
        induced = correlations(fit.tree)
        for i, j, target in alpha.pairs():
            assert induced.get(i, j) * target > 0

    def test_impossible_star_targets(self):
        alpha = CorrelationVector.from_pairs(
            [1, 2, 3], {(1, 2): 0.9, (1, 3): 0.9, (2, 3): 0.1}
        )
        with pytest.raises(NoConsistentModel):
            fit_known(STAR, alpha, 0.001)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 10**6))
    def test_never_fails_on_realizable_targets(self, seed):
        rng = philox(seed)
        n = int(rng.integers(3, 9))
        topo = random_model(n, rng).topology
        # weights including zeros and exact +-1
        theta = {}
        for e in topo.edges:
            kind = rng.random()
            if kind < 0.15:
                theta[e] = 0.0
            elif kind < 0.3:
                theta[e] = float(rng.choice((-1.0, 1.0)))
            else:
                theta[e] = float(rng.uniform(-1, 1))
        truth = WeightedTree(topo, theta)
        alpha = correlations(truth)
        eta = float(rng.uniform(1e-5, 0.3))
        fit = fit_known(topo, alpha, eta)
        induced = correlations(fit.tree)
        for i, j, target in alpha.pairs():
            assert abs(abs(induced.get(i, j)) - abs(target)) <= eta + 1e-9
            if abs(target) > eta:
                assert induced.get(i, j) * target > 0

    def test_report_fields(self):
        truth = three_leaf_star(0.5, 0.5, 1.0)
        alpha = correlations(truth)
        fit = fit_known(truth.topology, alpha, 0.01)
        report = fit_report(fit, alpha)
        assert report["signs_consistent"]
        assert report["max_magnitude_error"] <= 0.01 + 1e-9
        assert report["sign_equations"] == 3


class TestLearnFromSamples:
    def test_end_to_end_quality(self):
        truth = random_model(6, philox(21), magnitude=(0.2, 0.9), signed=True)
        draws = sample(truth, 50_000, 77)
        fit = learn_from_samples_known(truth.topology, draws, 0.05)
        assert exact_tv(truth, fit.tree) <= 0.1
        # when the fit lands within 4*eta of the truth pairwise, the
        # tensorization bound caps the total variation at 8 n^2 eta
        deviation = correlations(truth).max_abs_difference(correlations(fit.tree))
        if deviation <= 4 * fit.eta_used:
            assert exact_tv(truth, fit.tree) <= 8 * 6 ** 2 * fit.eta_used

    def test_zero_truth_stays_near_uniform(self):
        topo = random_model(6, philox(22)).topology
        truth = WeightedTree(topo, {e: 0.0 for e in topo.edges})
        draws = sample(truth, 20_000, 5)
        fit = learn_from_samples_known(topo, draws, 0.05)
        report = fit_report(fit, correlations(truth))
        eta = fit.eta_used
        assert report["max_magnitude_error"] <= 2 * eta
        assert exact_tv(truth, fit.tree) <= 2 * 6 ** 2 * 2 * eta

    def test_empty_samples(self):
        topo = STAR
        with pytest.raises(EmptySample):
            learn_from_samples_known(topo, np.zeros((0, 3)), 0.05)
