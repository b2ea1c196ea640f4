"""Identity testing: are samples drawn from a given reference model?

The statistic is the largest deviation between empirical pairwise
correlations and the reference's correlations; the decision threshold adds
the estimation radius to the slack that total-variation localization
affords, eps / (C * n^5 * D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, DimensionMismatch
from .estimation import empirical_correlations
from .forest import as_forest, forest_correlations, forest_diameter

#: constant from the different-topology total-variation bound
DEFAULT_TV_CONSTANT = 42.0


@dataclass(frozen=True)
class TestVerdict:
    decision: str  # "accept" or "reject"
    statistic: float
    threshold: float

    @property
    def accepted(self) -> bool:
        return self.decision == "accept"


def required_samples(
    n: int, diameter: int, eps: float, delta: float, constant: float = 1.0
) -> int:
    """Sample count sufficient to separate equal from eps-far models.

    Evaluates ceil(c * n^10 * D^2 * log(n/delta) / eps^2); astronomically
    large for realistic sizes, which is the honest reading of the rate.
    """
    if n < 2 or diameter < 1 or constant <= 0:
        raise BadParameter("need n >= 2, diameter >= 1, constant > 0")
    if not 0.0 < eps <= 1.0:
        raise BadParameter(f"eps must be in (0, 1], got {eps}")
    if not 0.0 < delta < 1.0:
        raise BadParameter(f"delta must be in (0, 1), got {delta}")
    count = constant * n ** 10 * diameter ** 2 * math.log(n / delta) / eps ** 2
    return int(math.ceil(count))


def test_identity(
    samples: np.ndarray,
    reference,
    eps: float,
    delta: float,
    tv_constant: float = DEFAULT_TV_CONSTANT,
) -> TestVerdict:
    """Accept when every pairwise deviation stays under the threshold.

    If the samples come from the reference, all deviations are within the
    Hoeffding radius with probability 1 - delta, so the verdict is accept;
    a model eps-far in total variation must disagree on some pair by more
    than eps / (C * n^5 * D), which the threshold leaves room to detect.
    """
    if eps <= 0.0:
        raise BadParameter(f"eps must be positive, got {eps}")
    ref = as_forest(reference)
    samples = np.asarray(samples)
    if samples.ndim != 2 or samples.shape[1] != ref.n:
        raise DimensionMismatch(
            f"samples have width {samples.shape[-1] if samples.ndim == 2 else '?'}, "
            f"reference has {ref.n} leaves"
        )
    if ref.leaves != tuple(range(1, ref.n + 1)):
        raise DimensionMismatch("reference leaves must be labeled 1..n")
    report = empirical_correlations(samples, delta)
    reference_alpha = forest_correlations(ref)
    statistic = report.alpha_hat.max_abs_difference(reference_alpha)
    d = max(1, forest_diameter(ref))
    threshold = report.eta + eps / (tv_constant * ref.n ** 5 * d)
    decision = "reject" if statistic > threshold else "accept"
    return TestVerdict(decision=decision, statistic=statistic, threshold=threshold)
