"""Sampling leaves and estimating correlations with a confidence radius.

Sampling is counter-based and seed-keyed: the same seed always reproduces
the same matrix.  The estimation radius eta = sqrt(2 log(n^2/delta) / m)
bounds every pairwise error simultaneously with probability 1 - delta.
"""

import numpy as np

from latent_ising import (
    correlations,
    empirical_correlations,
    normalize,
    random_weighted_tree,
    sample,
    samples_for_radius,
)

rng = np.random.Generator(np.random.Philox(key=7))
truth = normalize(random_weighted_tree(6, rng, -0.9, 0.9))
alpha = correlations(truth)

m, delta = 40_000, 0.05
draws = sample(truth, m, seed=123)
assert np.array_equal(draws, sample(truth, m, seed=123)), "same seed, same matrix"

report = empirical_correlations(draws, delta)
worst = report.alpha_hat.max_abs_difference(alpha)
print(f"n=6 leaves, m={m}, delta={delta}")
print(f"confidence radius eta = {report.eta:.5f}")
print(f"actual worst pairwise error = {worst:.5f}  (within eta: {worst <= report.eta})")

print("\nhow many samples would a target radius take?")
for eta in (0.05, 0.01, 0.002):
    print(f"  eta = {eta:<6} -> m = {samples_for_radius(6, delta, eta)}")
