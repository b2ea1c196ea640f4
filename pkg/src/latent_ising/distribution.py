"""Exact leaf-distribution evaluation, sampling, and total variation.

Two independent routes to the leaf distribution are kept side by side:

* a closed form that sums, over even leaf subsets, the product of
  correlations along the subset's unique edge-disjoint pair matching
  (a multilinear function of the correlation vector, defined even when the
  vector is not realizable on the tree), and
* direct marginalization of the internal spins by message passing.

The closed form powers the exact total-variation oracle; marginalization is
the cross-check.  Configurations over ``n`` leaves are indexed by bitmask:
bit ``k`` is set when the ``k``-th smallest leaf has spin +1.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from .errors import (
    BadParameter,
    BadSpinValue,
    DimensionMismatch,
    EmptySample,
    MalformedTree,
    TooLarge,
    UnknownLeaf,
    UnknownPair,
)
from .forest import WeightedForest
from .trees import (
    CorrelationVector,
    TreeTopology,
    WeightedTree,
    _pair_offset,
    _postorder,
    binary,
    correlations,
    normalize,
    path,
)

#: exact enumeration guard for total variation
MAX_EXACT_LEAVES = 14

Model = Union[WeightedTree, WeightedForest, Tuple[TreeTopology, CorrelationVector]]


# ---------------------------------------------------------------------------
# configurations


def config_index(topology_or_labels, x: Sequence[int]) -> int:
    """Bitmask of a spin configuration (bit k set when leaf k is +1)."""
    labels = (
        topology_or_labels.leaves
        if isinstance(topology_or_labels, TreeTopology)
        else tuple(topology_or_labels)
    )
    x = _check_config(len(labels), x)
    return int(sum(1 << k for k, s in enumerate(x) if s > 0))


def _check_config(n: int, x: Sequence[int]) -> np.ndarray:
    arr = np.asarray(x)
    if arr.shape != (n,):
        raise DimensionMismatch(f"configuration has length {arr.shape}, tree has {n} leaves")
    if not np.all(np.isin(arr, (-1, 1))):
        raise DimensionMismatch("spins must be -1 or +1")
    return arr.astype(np.int8)


class LeafDistribution:
    """Dense leaf distribution indexed by configuration bitmask."""

    __slots__ = ("labels", "probabilities")

    def __init__(self, labels: Iterable[int], probabilities: np.ndarray):
        self.labels = tuple(sorted(labels))
        probabilities = np.asarray(probabilities, dtype=float)
        if probabilities.shape != (2 ** len(self.labels),):
            raise DimensionMismatch("probability vector length is not 2^n")
        if probabilities.min(initial=0.0) < -1e-12:
            raise DimensionMismatch("negative probability beyond tolerance")
        if abs(probabilities.sum() - 1.0) > 1e-9:
            raise DimensionMismatch("probabilities do not sum to 1")
        self.probabilities = np.clip(probabilities, 0.0, None)
        self.probabilities.flags.writeable = False

    @classmethod
    def from_model(cls, model: Model) -> "LeafDistribution":
        labels, table = _model_table(model)
        return cls(labels, table)

    def prob(self, x: Sequence[int]) -> float:
        return float(self.probabilities[config_index(self.labels, x)])


# ---------------------------------------------------------------------------
# even-subset coefficients and the closed form


def _rooted_structure(topology: TreeTopology):
    order, parent = _postorder(topology, topology.leaves[0])
    children: Dict[int, List[int]] = {v: [] for v in order}
    for v in order:
        p = parent[v]
        if p is not None:
            children[p].append(v)
    leaf_pos = {leaf: k for k, leaf in enumerate(topology.leaves)}
    return order, children, leaf_pos


def _matching_pair_offsets(topology: TreeTopology) -> Tuple[np.ndarray, np.ndarray]:
    """For every even leaf subset (as a bitmask) the pair offsets of its matching.

    Returns (masks, index matrix); unused matrix slots point one past the
    last pair offset so a 1.0 sentinel can be gathered.
    """
    cache = topology._matchings
    if "table" in cache:
        return cache["table"]
    if not topology.is_binary():
        raise MalformedTree("closed form needs internal degree 3")
    n = topology.leaf_count
    order, children, leaf_pos = _rooted_structure(topology)
    n_pairs = n * (n - 1) // 2
    masks = np.array([m for m in range(2 ** n) if bin(m).count("1") % 2 == 0], dtype=np.int64)
    idx = np.full((len(masks), max(n // 2, 1)), n_pairs, dtype=np.int64)
    for row, mask in enumerate(masks):
        pending: Dict[int, int] = {}
        col = 0
        for v in order:
            carried = -1
            if topology.is_leaf(v) and (mask >> leaf_pos[v]) & 1:
                carried = leaf_pos[v]
            for w in children[v]:
                other = pending.get(w, -1)
                if other >= 0:
                    if carried >= 0:
                        a, b = (carried, other) if carried < other else (other, carried)
                        idx[row, col] = _pair_offset(n, a, b)
                        col += 1
                        carried = -1
                    else:
                        carried = other
            pending[v] = carried
    cache["table"] = (masks, idx)
    return cache["table"]


def even_subset_coefficients(topology: TreeTopology, alpha: CorrelationVector) -> np.ndarray:
    """Full-length (2^n) coefficient vector: matching products on even subsets."""
    if tuple(sorted(alpha.labels)) != topology.leaves:
        raise DimensionMismatch("correlation vector covers a different leaf set")
    masks, idx = _matching_pair_offsets(topology)
    values = np.append(alpha.values, 1.0)
    coef = np.zeros(2 ** topology.leaf_count)
    coef[masks] = values[idx].prod(axis=1)
    return coef


def _fwht(vec: np.ndarray) -> np.ndarray:
    """In-place-free fast Walsh-Hadamard transform (even-subset character sums)."""
    a = vec.copy()
    h = 1
    size = a.size
    while h < size:
        a = a.reshape(-1, 2, h)
        x = a[:, 0, :].copy()
        y = a[:, 1, :].copy()
        a[:, 0, :] = x + y
        a[:, 1, :] = x - y
        a = a.reshape(size)
        h *= 2
    return a


def closed_form_distribution(topology: TreeTopology, alpha: CorrelationVector) -> np.ndarray:
    """Evaluate the multilinear leaf form at every configuration.

    For an induced correlation vector this is the leaf distribution; for an
    arbitrary vector it is its multilinear extension and entries may be
    negative.
    """
    topology = _as_binary(topology)
    n = topology.leaf_count
    if n > 20:
        raise TooLarge(f"{n} leaves is beyond dense enumeration")
    coef = even_subset_coefficients(topology, alpha)
    return _fwht(coef) / (2 ** n)


def closed_form_prob(topology: TreeTopology, alpha: CorrelationVector, x: Sequence[int]) -> float:
    """The multilinear leaf form at one configuration."""
    topology = _as_binary(topology)
    n = topology.leaf_count
    arr = _check_config(n, x)
    masks, idx = _matching_pair_offsets(topology)
    values = np.append(alpha.values, 1.0)
    coef = values[idx].prod(axis=1)
    neg_mask = int(sum(1 << k for k, s in enumerate(arr) if s < 0))
    signs = 1.0 - 2.0 * _parity(masks & neg_mask)
    return float(np.dot(coef, signs) / (2 ** n))


def _parity(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    for shift in (32, 16, 8, 4, 2, 1):
        m ^= m >> shift
    return (m & 1).astype(float)


def _as_binary(topology: TreeTopology) -> TreeTopology:
    if topology.is_binary():
        return topology
    contracted = binary(topology)
    if not contracted.is_binary():
        raise MalformedTree("topology has internal degree above 3")
    return contracted


# ---------------------------------------------------------------------------
# marginalization oracle


def marginalize_prob(tree: WeightedTree, x: Sequence[int]) -> float:
    """Exact leaf probability by summing out internal spins along the tree.

    Works on any valid weighted tree (no degree restrictions); serves as the
    independent cross-check of the closed form.
    """
    topology = tree.topology
    n = topology.leaf_count
    arr = _check_config(n, x)
    if n == 1:
        return 0.5
    spin = {leaf: int(s) for leaf, s in zip(topology.leaves, arr)}
    root = topology.leaves[0]
    order, parent = _postorder(topology, root)
    # below[v] = subtree contribution as a function of v's spin (+1, -1)
    below: Dict[int, Tuple[float, float]] = {}
    for v in order:
        if topology.is_leaf(v) and v != root:
            s = spin[v]
            below[v] = (1.0 if s == 1 else 0.0, 1.0 if s == -1 else 0.0)
            continue
        plus = minus = 1.0
        for c in topology.neighbors(v):
            if c == parent[v]:
                continue
            th = tree.weight(v, c)
            cp, cm = below[c]
            plus *= 0.5 * ((1.0 + th) * cp + (1.0 - th) * cm)
            minus *= 0.5 * ((1.0 - th) * cp + (1.0 + th) * cm)
        below[v] = (plus, minus)
    root_plus, root_minus = below[root]
    return 0.5 * (root_plus if spin[root] == 1 else root_minus)


def marginal_distribution(tree: WeightedTree) -> np.ndarray:
    """Full leaf distribution via marginalization, one configuration at a time."""
    n = tree.topology.leaf_count
    if n > MAX_EXACT_LEAVES:
        raise TooLarge(f"{n} leaves is beyond dense enumeration")
    out = np.empty(2 ** n)
    for mask in range(2 ** n):
        x = [1 if (mask >> k) & 1 else -1 for k in range(n)]
        out[mask] = marginalize_prob(tree, x)
    return out


# ---------------------------------------------------------------------------
# sampling


def sample(model: Model, m: int, seed: int) -> np.ndarray:
    """Draw ``m`` i.i.d. leaf configurations as an (m, n) matrix of +-1 spins.

    The root spin is uniform and each spin copies its neighbor with
    probability (1 + theta)/2.  Randomness comes from a counter-based
    generator keyed by ``seed``, with each row reading a fixed slice of the
    stream, so output is reproducible and row-parallelizable.
    """
    if m < 1:
        raise EmptySample(f"need at least one sample, got {m}")
    seed = int(seed)
    if seed < 0:
        raise BadParameter("seed must be non-negative")
    components = (
        model.components if isinstance(model, WeightedForest) else (model,)
    )
    rng = np.random.Generator(np.random.Philox(key=seed))
    columns: Dict[int, np.ndarray] = {}
    for tree in components:
        topology = tree.topology
        root = topology.leaves[0]
        order, parent = _postorder(topology, root)
        order = order[::-1]  # root first
        uniform = rng.random((m, len(order)))
        spins: Dict[int, np.ndarray] = {
            root: np.where(uniform[:, 0] < 0.5, 1, -1).astype(np.int8)
        }
        for k, v in enumerate(order[1:], start=1):
            th = tree.weight(parent[v], v)
            agree = uniform[:, k] < (1.0 + th) / 2.0
            spins[v] = np.where(agree, spins[parent[v]], -spins[parent[v]]).astype(np.int8)
        for leaf in topology.leaves:
            columns[leaf] = spins[leaf]
    labels = sorted(columns)
    return np.column_stack([columns[leaf] for leaf in labels])


# ---------------------------------------------------------------------------
# sample files: optional "# n=<n> m=<m>" header, then one row of +-1 per line


def write_samples(path, samples: np.ndarray) -> None:
    samples = np.asarray(samples)
    m, n = samples.shape
    with open(path, "w") as fh:
        fh.write(f"# n={n} m={m}\n")
        for row in samples:
            fh.write(" ".join("+1" if s > 0 else "-1" for s in row) + "\n")


def read_samples(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            rows.append([int(tok) for tok in line.split()])
    if not rows:
        raise EmptySample(f"no sample rows in {path}")
    samples = np.array(rows, dtype=np.int8)
    if not np.all(np.isin(samples, (-1, 1))):
        raise BadSpinValue("sample file contains entries outside {-1, +1}")
    return samples


# ---------------------------------------------------------------------------
# exact total variation


def _model_table(model: Model) -> Tuple[Tuple[int, ...], np.ndarray]:
    if isinstance(model, tuple):
        topology, alpha = model
        return topology.leaves, closed_form_distribution(topology, alpha)
    if isinstance(model, WeightedTree):
        if model.topology.leaf_count == 1:
            return model.topology.leaves, np.array([0.5, 0.5])
        norm = normalize(model)
        return norm.topology.leaves, closed_form_distribution(
            norm.topology, correlations(norm)
        )
    if isinstance(model, WeightedForest):
        labels = model.leaves
        n = len(labels)
        pos = {leaf: k for k, leaf in enumerate(labels)}
        table = np.ones(2 ** n)
        all_masks = np.arange(2 ** n)
        for comp in model.components:
            comp_labels, comp_table = _model_table(comp)
            sub = np.zeros(2 ** n, dtype=np.int64)
            for k, leaf in enumerate(comp_labels):
                sub |= ((all_masks >> pos[leaf]) & 1) << k
            table = table * comp_table[sub]
        return labels, table
    raise TypeError(f"cannot evaluate {type(model).__name__} as a leaf distribution")


def exact_tv(a: Model, b: Model) -> float:
    """Total variation between two leaf models by direct enumeration.

    Accepts weighted trees, forests, or (topology, correlation-vector)
    pairs; the latter need not be realizable, in which case the multilinear
    extension is compared.  Limited to 14 leaves.
    """
    labels_a = _model_labels(a)
    labels_b = _model_labels(b)
    if labels_a != labels_b:
        raise DimensionMismatch(f"leaf sets differ: {labels_a} vs {labels_b}")
    if len(labels_a) > MAX_EXACT_LEAVES:
        raise TooLarge(f"{len(labels_a)} leaves is beyond exact enumeration")
    _, table_a = _model_table(a)
    _, table_b = _model_table(b)
    return float(0.5 * np.abs(table_a - table_b).sum())


def _model_labels(model: Model) -> Tuple[int, ...]:
    if isinstance(model, tuple):
        return model[0].leaves
    if isinstance(model, (WeightedTree,)):
        return model.topology.leaves
    if isinstance(model, WeightedForest):
        return model.leaves
    raise TypeError(f"cannot evaluate {type(model).__name__} as a leaf distribution")


# ---------------------------------------------------------------------------
# path removal


def path_removed(
    alpha: CorrelationVector, topology: TreeTopology, removal: Sequence[int]
) -> CorrelationVector:
    """Zero every pair whose path shares an edge with the removal paths.

    ``removal`` is a leaf pair or a quartet; its removal paths are all
    pairwise paths among the removal leaves.
    """
    members = tuple(removal)
    if len(set(members)) != len(members) or len(members) not in (2, 4):
        raise UnknownPair(f"removal must be 2 or 4 distinct leaves, got {members}")
    for v in members:
        if not topology.is_leaf(v):
            raise UnknownLeaf(f"{v} is not a leaf of the tree")
    if tuple(sorted(alpha.labels)) != topology.leaves:
        raise DimensionMismatch("correlation vector covers a different leaf set")
    removed_edges = set()
    for i, j in itertools.combinations(members, 2):
        removed_edges.update(path(topology, i, j))
    changes = {}
    for i, j, _ in alpha.pairs():
        if removed_edges.intersection(path(topology, i, j)):
            changes[(i, j)] = 0.0
    return alpha.replace(changes)
