"""Weight fitting on a known topology: magnitudes by LP, signs over GF(2).

Given target pairwise correlations and a radius ``eta``, the fitter searches
for edge weights whose induced |correlations| land within ``eta`` of the
targets.  Working in log space turns the path-product constraints into
interval constraints on path sums of log-weights (all <= 0); signs are then
recovered separately from a parity system over the edges, using only pairs
whose target magnitude exceeds ``eta``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from .errors import BadParameter, NoConsistentModel
from .estimation import empirical_correlations
from .solvers import (
    Gf2Equation,
    Gf2System,
    Inconsistent,
    Infeasible,
    IntervalPathLP,
    PathConstraint,
    gf2_solve,
    lp_feasible,
)
from .trees import (
    CorrelationVector,
    TreeTopology,
    WeightedTree,
    correlations,
    path,
)

#: fitted magnitudes below this are reported as exactly zero
ZERO_CLAMP = 1e-12


@dataclass(frozen=True)
class KnownTopologyFit:
    tree: WeightedTree
    eta_used: float
    sign_equations_used: int


def _pair_paths(topology: TreeTopology) -> List[Tuple[Tuple[int, int], Tuple[int, ...]]]:
    edge_index = {e: k for k, e in enumerate(topology.edges)}
    out = []
    for i, j in itertools.combinations(topology.leaves, 2):
        out.append(((i, j), tuple(edge_index[e] for e in path(topology, i, j))))
    return out


def build_interval_lp(
    topology: TreeTopology, alpha_hat: CorrelationVector, eta: float
) -> Tuple[IntervalPathLP, List[Tuple[int, int]]]:
    """Interval program on log-magnitudes; a magnitude below eta drops its
    lower bound (log of a non-positive number reads as -inf)."""
    constraints = []
    pairs = []
    for (i, j), edge_ids in _pair_paths(topology):
        a = abs(alpha_hat.get(i, j))
        upper = math.log(a + eta)
        lower = math.log(a - eta) if a - eta > 0.0 else None
        constraints.append(PathConstraint(variables=edge_ids, lower=lower, upper=upper))
        pairs.append((i, j))
    return IntervalPathLP(len(topology.edges), tuple(constraints)), pairs


def fit_known(
    topology: TreeTopology, alpha_hat: CorrelationVector, eta: float
) -> KnownTopologyFit:
    """Fit edge weights so induced correlations track ``alpha_hat`` within eta.

    Raises :class:`NoConsistentModel` when no tree metric on this topology is
    eta-close to the targets (LP infeasible) or the requested signs are
    contradictory (parity system inconsistent).
    """
    if eta <= 0.0:
        raise BadParameter(f"eta must be positive, got {eta}")
    if topology.leaf_count < 2:
        return KnownTopologyFit(WeightedTree(topology, {}), eta, 0)

    lp, pairs = build_interval_lp(topology, alpha_hat, eta)
    solved = lp_feasible(lp)
    if isinstance(solved, Infeasible):
        i, j = pairs[solved.constraint]
        raise NoConsistentModel(
            f"no weights reach |alpha({i},{j})| within {eta}: {solved.message}"
        )
    magnitudes = np.exp(solved)
    magnitudes[magnitudes < ZERO_CLAMP] = 0.0

    edge_index = {e: k for k, e in enumerate(topology.edges)}
    equations = []
    strong_pairs = []
    for (i, j), edge_ids in _pair_paths(topology):
        value = alpha_hat.get(i, j)
        if abs(value) > eta:
            equations.append(
                Gf2Equation(variables=edge_ids, rhs=0 if value > 0 else 1)
            )
            strong_pairs.append((i, j))
    system = Gf2System(len(topology.edges), tuple(equations))
    bits = gf2_solve(system)
    if isinstance(bits, Inconsistent):
        i, j = strong_pairs[bits.equation]
        raise NoConsistentModel(
            f"sign constraints are contradictory at pair ({i},{j}): {bits.message}"
        )
    theta = {
        e: float((-1.0 if bits[edge_index[e]] else 1.0) * magnitudes[edge_index[e]])
        for e in topology.edges
    }
    tree = WeightedTree(topology, theta)
    return KnownTopologyFit(tree=tree, eta_used=eta, sign_equations_used=len(equations))


def learn_from_samples_known(
    topology: TreeTopology, samples: np.ndarray, delta: float
) -> KnownTopologyFit:
    """Estimate correlations from samples, then fit the known topology with
    the matching confidence radius."""
    report = empirical_correlations(samples, delta)
    if report.alpha_hat.n != topology.leaf_count:
        raise BadParameter(
            f"samples have {report.alpha_hat.n} columns, topology has "
            f"{topology.leaf_count} leaves"
        )
    return fit_known(topology, report.alpha_hat, report.eta)


def fit_report(fit: KnownTopologyFit, alpha_hat: CorrelationVector) -> Dict:
    """Feasibility margins of a fit against its target correlations."""
    induced = correlations(fit.tree)
    worst = 0.0
    sign_ok = True
    for i, j, target in alpha_hat.pairs():
        got = induced.get(i, j)
        worst = max(worst, abs(abs(got) - abs(target)))
        if abs(target) > fit.eta_used and got * target < 0:
            sign_ok = False
    return {
        "eta": fit.eta_used,
        "sign_equations": fit.sign_equations_used,
        "max_magnitude_error": worst,
        "signs_consistent": sign_ok,
    }
