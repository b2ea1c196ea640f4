"""Unknown-topology learning: reconstruct a forest, then fit each component.

Reconstruction runs on |correlations| (the ferromagnetic view); the sign
structure is restored per component by the known-topology fitter's parity
stage.  Parameters follow the radius-splitting recipe delta = eta^{2/3}
n^{2/3}, xi = eta^{1/3} n^{-2/3}, whose product is exactly eta.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameter, NoConsistentModel
from .estimation import empirical_correlations
from .forest import WeightedForest
from .learn_known import fit_known
from .reconstruct import reconstruct_forest
from .trees import CorrelationVector, TreeTopology, WeightedTree

#: smallest fitting radius used when correlations are exact
MIN_FIT_RADIUS = 1e-9


@dataclass(frozen=True)
class UnknownLearnConfig:
    """Radii and split parameters for one unknown-topology run.

    ``clamped`` flags inputs outside the eta <= O(1/n) regime; the stored
    eta is then lowered to keep xi * delta_split >= eta true.
    """

    eta: float
    xi: float
    delta_split: float
    eta_prime: float
    clamped: bool


def choose_params(eta: float, n: int, c1: float = 1.0, c2: float = 4.0) -> UnknownLearnConfig:
    """Split a correlation radius eta into reconstruction parameters."""
    if eta <= 0.0:
        raise BadParameter(f"eta must be positive, got {eta}")
    if n < 2:
        raise BadParameter(f"need at least two leaves, got {n}")
    xi = eta ** (1.0 / 3.0) * n ** (-2.0 / 3.0)
    clamped = False
    if eta > min(1.0, c1 ** 3 / n):
        clamped = True
        xi = min(xi, c1 / n, 0.9)
    delta_split = eta / xi  # equals eta^{2/3} n^{2/3} in the nominal regime
    if delta_split >= 1.0:
        clamped = True
        delta_split = 0.9
    eta_eff = min(eta, xi * delta_split)
    return UnknownLearnConfig(
        eta=eta_eff,
        xi=xi,
        delta_split=delta_split,
        eta_prime=c2 * n * xi + eta_eff,
        clamped=clamped,
    )


def _fit_component(
    topology: TreeTopology,
    alpha_hat: CorrelationVector,
    eta: float,
    eta_prime: float,
) -> WeightedTree:
    if topology.leaf_count == 1:
        return WeightedTree(topology, {})
    # Try the raw radius first: when the component topology matches the truth
    # the targets are realizable within eta.  The widened radius is the
    # fallback that stays feasible after near-unit edge contractions.
    try:
        return fit_known(topology, alpha_hat, max(eta, MIN_FIT_RADIUS)).tree
    except NoConsistentModel:
        return fit_known(topology, alpha_hat, max(eta_prime, MIN_FIT_RADIUS)).tree


def learn_unknown_from_correlations(
    alpha_hat: CorrelationVector,
    eta: float,
    contraction_constant: float = 4.0,
    c1: float = 1.0,
    c2: float = 4.0,
) -> WeightedForest:
    """Reconstruct and fit a weighted forest from estimated correlations."""
    cfg = choose_params(eta, alpha_hat.n, c1, c2)
    rec = reconstruct_forest(
        alpha_hat,
        xi=cfg.xi,
        delta=cfg.delta_split,
        eta=cfg.eta,
        contraction_constant=contraction_constant,
    )
    components = [
        _fit_component(t, alpha_hat, cfg.eta, cfg.eta_prime) for t in rec.components
    ]
    return WeightedForest(components)


def learn_unknown(
    samples: np.ndarray,
    delta_conf: float,
    contraction_constant: float = 4.0,
    c1: float = 1.0,
    c2: float = 4.0,
) -> WeightedForest:
    """Full pipeline: estimate correlations, reconstruct, fit per component."""
    report = empirical_correlations(samples, delta_conf)
    return learn_unknown_from_correlations(
        report.alpha_hat,
        report.eta,
        contraction_constant=contraction_constant,
        c1=c1,
        c2=c2,
    )
