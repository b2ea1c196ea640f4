"""Unrooted leaf-labeled trees: topology, surgery, and path correlations.

A tree Ising model lives on an unrooted tree whose observed nodes are the
leaves.  This module holds the topology representation plus the purely
combinatorial operations: degree normalization, path queries, correlations
as path products of edge weights, quartet classification, cut-and-paste
surgery, induced subtrees, and the edge-disjoint pair matching that drives
the closed-form leaf distribution.

All values are immutable after construction; every operation returns a new
object, so instances are safe to share across threads.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    InvalidCut,
    MalformedTree,
    OddSubset,
    TooFewLeaves,
    UnknownLeaf,
    UnknownPair,
)

Edge = Tuple[int, int]

#: absolute tolerance used when deciding that two cross-products tie
TIE_TOLERANCE = 1e-12


def edge_key(u: int, v: int) -> Edge:
    """Canonical (sorted) form of an undirected edge."""
    return (u, v) if u < v else (v, u)


class TreeTopology:
    """Unrooted tree over labeled leaves.

    Leaves carry external integer labels (a full model uses ``1..n``);
    internal nodes use identifiers strictly above every leaf label.  A
    one-leaf topology (a single isolated node) is allowed so that forests
    can carry singleton components.

    Raises :class:`MalformedTree` unless the edge set forms a connected,
    acyclic graph in which every leaf has degree exactly 1 and no internal
    node dangles with degree < 2.
    """

    __slots__ = ("leaves", "edges", "_adjacency", "_leaf_set", "_matchings", "_leaf_dist")

    def __init__(self, leaves: Iterable[int], edges: Iterable[Edge]):
        self.leaves: Tuple[int, ...] = tuple(sorted(set(leaves)))
        if not self.leaves:
            raise MalformedTree("a tree needs at least one leaf")
        self.edges: Tuple[Edge, ...] = tuple(sorted(edge_key(u, v) for u, v in edges))
        self._leaf_set = frozenset(self.leaves)
        self._matchings: Dict[int, tuple] = {}
        self._leaf_dist: Optional[Dict[Tuple[int, int], int]] = None

        adjacency: Dict[int, List[int]] = {v: [] for v in self.leaves}
        for u, v in self.edges:
            if u == v:
                raise MalformedTree(f"self-loop at node {u}")
            adjacency.setdefault(u, []).append(v)
            adjacency.setdefault(v, []).append(u)
        if len(set(self.edges)) != len(self.edges):
            raise MalformedTree("duplicate edge")
        self._adjacency = {v: tuple(sorted(ns)) for v, ns in adjacency.items()}
        self._validate()

    # -- structure ---------------------------------------------------------

    def _validate(self) -> None:
        nodes = self.nodes
        if len(self.leaves) == 1:
            if self.edges:
                raise MalformedTree("one-leaf tree must have no edges")
            return
        if len(self.edges) != len(nodes) - 1:
            raise MalformedTree("edge count does not match a tree")
        # connectivity
        seen = {self.leaves[0]}
        queue = deque(seen)
        while queue:
            v = queue.popleft()
            for w in self._adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != len(nodes):
            raise MalformedTree("graph is disconnected")
        max_leaf = self.leaves[-1]
        for v in nodes:
            deg = len(self._adjacency[v])
            if v in self._leaf_set:
                if deg != 1:
                    raise MalformedTree(f"leaf {v} has degree {deg}")
            else:
                if v <= max_leaf:
                    raise MalformedTree(f"internal node {v} collides with leaf labels")
                if deg < 2:
                    raise MalformedTree(f"internal node {v} dangles with degree {deg}")

    @property
    def nodes(self) -> frozenset:
        return frozenset(self._adjacency)

    @property
    def leaf_count(self) -> int:
        return len(self.leaves)

    def is_leaf(self, v: int) -> bool:
        return v in self._leaf_set

    def neighbors(self, v: int) -> Tuple[int, ...]:
        try:
            return self._adjacency[v]
        except KeyError:
            raise UnknownLeaf(f"node {v} not in tree") from None

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: int, v: int) -> bool:
        return u in self._adjacency and v in self._adjacency[u]

    def is_binary(self) -> bool:
        """True when every internal node has degree exactly 3."""
        return all(
            len(ns) == 3 for v, ns in self._adjacency.items() if v not in self._leaf_set
        )

    def __repr__(self) -> str:  # pragma: no cover
        return f"TreeTopology(leaves={self.leaves}, edges={list(self.edges)})"

    # -- cached leaf distances (edge counts) --------------------------------

    def leaf_distances(self) -> Dict[Tuple[int, int], int]:
        """Edge-count distance for every unordered leaf pair."""
        if self._leaf_dist is None:
            dist: Dict[Tuple[int, int], int] = {}
            for a in self.leaves:
                level = {a: 0}
                queue = deque([a])
                while queue:
                    v = queue.popleft()
                    for w in self._adjacency[v]:
                        if w not in level:
                            level[w] = level[v] + 1
                            queue.append(w)
                for b in self.leaves:
                    if b > a:
                        dist[(a, b)] = level[b]
            self._leaf_dist = dist
        return self._leaf_dist


class WeightedTree:
    """A topology together with one weight in [-1, 1] per edge."""

    __slots__ = ("topology", "theta")

    def __init__(self, topology: TreeTopology, theta: Mapping[Edge, float]):
        self.topology = topology
        normalized = {edge_key(u, v): float(w) for (u, v), w in theta.items()}
        for e in topology.edges:
            if e not in normalized:
                raise MalformedTree(f"edge {e} has no weight")
        if len(normalized) != len(topology.edges):
            raise MalformedTree("weight map mentions edges not in the tree")
        for e, w in normalized.items():
            if abs(w) > 1.0 + 1e-12:
                raise MalformedTree(f"weight {w} on edge {e} outside [-1, 1]")
        self.theta: Dict[Edge, float] = {
            e: min(1.0, max(-1.0, normalized[e])) for e in topology.edges
        }

    def weight(self, u: int, v: int) -> float:
        return self.theta[edge_key(u, v)]

    @property
    def leaves(self) -> Tuple[int, ...]:
        return self.topology.leaves

    def __repr__(self) -> str:  # pragma: no cover
        return f"WeightedTree({self.topology!r}, {self.theta!r})"


class CorrelationVector:
    """Pairwise leaf correlations, one value in [-1, 1] per unordered pair.

    The vector may hold true path products, empirical estimates, or an
    arbitrary point of the cube; nothing here assumes it is realizable on a
    tree.
    """

    __slots__ = ("labels", "values", "_pos")

    def __init__(self, labels: Iterable[int], values: np.ndarray):
        self.labels: Tuple[int, ...] = tuple(sorted(labels))
        n = len(self.labels)
        values = np.asarray(values, dtype=float)
        if values.shape != (n * (n - 1) // 2,):
            raise UnknownPair(
                f"need {n * (n - 1) // 2} pair values for {n} leaves, got {values.shape}"
            )
        if n and np.max(np.abs(values), initial=0.0) > 1.0 + 1e-9:
            raise UnknownPair("correlation outside [-1, 1]")
        self.values = np.clip(values, -1.0, 1.0)
        self.values.flags.writeable = False
        self._pos = {lab: k for k, lab in enumerate(self.labels)}

    @classmethod
    def from_pairs(cls, labels: Iterable[int], pairs: Mapping[Edge, float]) -> "CorrelationVector":
        labels = tuple(sorted(labels))
        out = np.zeros(len(labels) * (len(labels) - 1) // 2)
        pos = {lab: k for k, lab in enumerate(labels)}
        for (i, j), v in pairs.items():
            a, b = sorted((pos[i], pos[j]))
            out[_pair_offset(len(labels), a, b)] = v
        return cls(labels, out)

    @property
    def n(self) -> int:
        return len(self.labels)

    def index(self, i: int, j: int) -> int:
        if i == j:
            raise UnknownPair(f"pair ({i}, {j}) has identical endpoints")
        try:
            a, b = sorted((self._pos[i], self._pos[j]))
        except KeyError as exc:
            raise UnknownLeaf(f"leaf {exc.args[0]} not covered by this vector") from None
        return _pair_offset(self.n, a, b)

    def get(self, i: int, j: int) -> float:
        return float(self.values[self.index(i, j)])

    def pairs(self) -> Iterable[Tuple[int, int, float]]:
        for a, b in itertools.combinations(range(self.n), 2):
            yield self.labels[a], self.labels[b], float(self.values[_pair_offset(self.n, a, b)])

    def abs(self) -> "CorrelationVector":
        return CorrelationVector(self.labels, np.abs(self.values))

    def replace(self, changes: Mapping[Edge, float]) -> "CorrelationVector":
        values = self.values.copy()
        for (i, j), v in changes.items():
            values[self.index(i, j)] = v
        return CorrelationVector(self.labels, values)

    def max_abs_difference(self, other: "CorrelationVector") -> float:
        if self.labels != other.labels:
            raise UnknownPair("vectors cover different leaf sets")
        if self.n < 2:
            return 0.0
        return float(np.max(np.abs(self.values - other.values)))


def _pair_offset(n: int, a: int, b: int) -> int:
    # positions 0 <= a < b < n in lexicographic pair order
    return a * (2 * n - a - 1) // 2 + (b - a - 1)


@dataclass(frozen=True)
class QuartetSplit:
    """The induced pairing of four leaves plus its product gap."""

    quartet: Tuple[int, int, int, int]
    split: Tuple[Edge, Edge]
    gap: float


# ---------------------------------------------------------------------------
# path queries


def path_nodes(topology: TreeTopology, a: int, b: int) -> List[int]:
    """Node sequence of the unique simple path from a to b (inclusive)."""
    if a == b:
        raise UnknownPair(f"path endpoints coincide: {a}")
    if a not in topology.nodes:
        raise UnknownLeaf(f"node {a} not in tree")
    if b not in topology.nodes:
        raise UnknownLeaf(f"node {b} not in tree")
    parent = {a: a}
    queue = deque([a])
    while queue:
        v = queue.popleft()
        if v == b:
            break
        for w in topology.neighbors(v):
            if w not in parent:
                parent[w] = v
                queue.append(w)
    nodes = [b]
    while nodes[-1] != a:
        nodes.append(parent[nodes[-1]])
    nodes.reverse()
    return nodes


def path(topology: TreeTopology, i: int, j: int) -> List[Edge]:
    """Ordered edge list of the unique path between two leaves."""
    nodes = path_nodes(topology, i, j)
    return [edge_key(u, v) for u, v in zip(nodes, nodes[1:])]


def component_nodes(topology: TreeTopology, start: int, blocked: Iterable[Edge]) -> frozenset:
    """Nodes reachable from ``start`` without crossing any blocked edge."""
    blocked_set = {edge_key(u, v) for u, v in blocked}
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in topology.neighbors(v):
            if w not in seen and edge_key(v, w) not in blocked_set:
                seen.add(w)
                queue.append(w)
    return frozenset(seen)


def component_leaves(topology: TreeTopology, start: int, blocked: Iterable[Edge]) -> frozenset:
    return frozenset(v for v in component_nodes(topology, start, blocked) if topology.is_leaf(v))


def diameter(topology: TreeTopology) -> int:
    """Longest leaf-to-leaf path length in edges (0 for a single leaf)."""
    if topology.leaf_count < 2:
        return 0
    return max(topology.leaf_distances().values())


# ---------------------------------------------------------------------------
# normalization


def _renumber(leaves: Sequence[int], edges: Iterable[Edge]) -> List[Tuple[Edge, Edge]]:
    """Map internal node ids to max(leaf)+1.. in BFS order from the smallest leaf.

    Returns (old_edge, new_edge) pairs so weight maps can follow along.
    """
    leaves = sorted(leaves)
    adjacency: Dict[int, List[int]] = {}
    for u, v in edges:
        adjacency.setdefault(u, []).append(v)
        adjacency.setdefault(v, []).append(u)
    mapping = {leaf: leaf for leaf in leaves}
    if adjacency:
        nxt = leaves[-1] + 1
        leaf_set = set(leaves)
        seen = {leaves[0]}
        queue = deque([leaves[0]])
        while queue:
            v = queue.popleft()
            if v not in leaf_set and v not in mapping:
                mapping[v] = nxt
                nxt += 1
            for w in sorted(adjacency[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return [
        (edge_key(u, v), edge_key(mapping[u], mapping[v])) for u, v in edges
    ]


def binary(topology: TreeTopology) -> TreeTopology:
    """Contract every maximal chain of degree-2 internal nodes to one edge."""
    contracted, _ = _contract_degree_two(topology, None)
    return contracted


def _contract_degree_two(
    topology: TreeTopology, theta: Optional[Mapping[Edge, float]]
) -> Tuple[TreeTopology, Dict[Edge, float]]:
    adjacency = {v: list(ns) for v, ns in topology._adjacency.items()}
    weights = dict(theta) if theta is not None else {e: 1.0 for e in topology.edges}
    leaf_set = set(topology.leaves)
    changed = True
    while changed:
        changed = False
        for v in sorted(adjacency):
            if v in leaf_set or len(adjacency[v]) != 2:
                continue
            a, b = adjacency[v]
            w = weights.pop(edge_key(a, v)) * weights.pop(edge_key(v, b))
            del adjacency[v]
            adjacency[a].remove(v)
            adjacency[b].remove(v)
            if b in adjacency[a]:
                raise MalformedTree("contraction produced a parallel edge")
            adjacency[a].append(b)
            adjacency[b].append(a)
            weights[edge_key(a, b)] = w
            changed = True
            break
    edges = {edge_key(u, v) for u, ns in adjacency.items() for v in ns}
    relabel = dict(_renumber(sorted(leaf_set), edges))
    new_topology = TreeTopology(leaf_set, relabel.values())
    new_weights = {relabel[e]: weights[e] for e in edges}
    return new_topology, new_weights


def normalize(tree: WeightedTree) -> WeightedTree:
    """Return a leaf-equivalent tree whose internal nodes all have degree 3.

    Degree-2 chains are contracted into a single edge carrying the product
    of the chain's weights; nodes of degree 4 or more are split apart with
    inserted weight-1 edges.  Neither move changes the leaf distribution.
    """
    if tree.topology.leaf_count < 2:
        raise MalformedTree("normalization needs at least two leaves")
    topology, weights = _contract_degree_two(tree.topology, tree.theta)

    adjacency = {v: list(ns) for v, ns in topology._adjacency.items()}
    leaf_set = set(topology.leaves)
    next_id = max(adjacency) + 1 if adjacency else topology.leaves[-1] + 1
    changed = True
    while changed:
        changed = False
        for v in sorted(adjacency):
            if v in leaf_set or len(adjacency[v]) <= 3:
                continue
            moved = sorted(adjacency[v])[2:]
            w = next_id
            next_id += 1
            adjacency[w] = []
            for u in moved:
                adjacency[v].remove(u)
                adjacency[u].remove(v)
                adjacency[u].append(w)
                adjacency[w].append(u)
                weights[edge_key(u, w)] = weights.pop(edge_key(u, v))
            adjacency[v].append(w)
            adjacency[w].append(v)
            weights[edge_key(v, w)] = 1.0
            changed = True
            break
    edges = {edge_key(u, v) for u, ns in adjacency.items() for v in ns}
    relabel = dict(_renumber(sorted(leaf_set), edges))
    new_topology = TreeTopology(leaf_set, relabel.values())
    if not new_topology.is_binary():
        raise MalformedTree("normalization failed to reach internal degree 3")
    return WeightedTree(new_topology, {relabel[e]: weights[e] for e in edges})


# ---------------------------------------------------------------------------
# correlations and quartets


def correlations(tree: WeightedTree) -> CorrelationVector:
    """Pairwise leaf correlations: the product of edge weights along each path."""
    topo = tree.topology
    labels = topo.leaves
    n = len(labels)
    values = np.zeros(n * (n - 1) // 2)
    pos = {lab: k for k, lab in enumerate(labels)}
    for a in labels:
        prod = {a: 1.0}
        queue = deque([a])
        while queue:
            v = queue.popleft()
            for w in topo.neighbors(v):
                if w not in prod:
                    prod[w] = prod[v] * tree.weight(v, w)
                    queue.append(w)
        for b in labels:
            if b > a:
                values[_pair_offset(n, pos[a], pos[b])] = prod[b]
    return CorrelationVector(labels, values)


_SPLIT_ORDER = ((0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2))


def quartet_split(alpha: CorrelationVector, quartet: Sequence[int]) -> QuartetSplit:
    """Classify four leaves by the largest cross-product of |correlations|.

    Exact ties (within ``TIE_TOLERANCE``) resolve to the lexicographically
    smallest split so the outcome is deterministic.
    """
    if len(set(quartet)) != 4:
        raise UnknownPair(f"quartet needs four distinct leaves, got {tuple(quartet)}")
    q = tuple(sorted(quartet))
    products = []
    for ia, ib, ic, id_ in _SPLIT_ORDER:
        products.append(abs(alpha.get(q[ia], q[ib])) * abs(alpha.get(q[ic], q[id_])))
    best = max(products)
    chosen = next(k for k, p in enumerate(products) if p >= best - TIE_TOLERANCE)
    ia, ib, ic, id_ = _SPLIT_ORDER[chosen]
    split = ((q[ia], q[ib]), (q[ic], q[id_]))
    return QuartetSplit(q, split, best - min(products))


def quartet_gap(alpha: CorrelationVector, quartet: Sequence[int]) -> float:
    """Max minus min of the three |correlation| cross-products."""
    return quartet_split(alpha, quartet).gap


def canonical_splits(topology: TreeTopology) -> frozenset:
    """All structurally resolved quartet splits; the canonical form of a topology.

    Two degree-2-free trees on the same leaf set are isomorphic exactly when
    these sets agree.  Quartets meeting at a single node (possible after edge
    contractions) are unresolved and omitted.
    """
    dist = topology.leaf_distances()

    def d(i: int, j: int) -> int:
        return dist[(i, j) if i < j else (j, i)]

    splits = set()
    for q in itertools.combinations(topology.leaves, 4):
        sums = [
            d(q[ia], q[ib]) + d(q[ic], q[id_]) for ia, ib, ic, id_ in _SPLIT_ORDER
        ]
        smallest = min(sums)
        winners = [k for k, s in enumerate(sums) if s == smallest]
        if len(winners) == 1:
            ia, ib, ic, id_ = _SPLIT_ORDER[winners[0]]
            splits.add(((q[ia], q[ib]), (q[ic], q[id_])))
    return frozenset(splits)


def topologies_equal(a: TreeTopology, b: TreeTopology) -> bool:
    """Leaf-labeled isomorphism via equality of resolved quartet split sets."""
    return a.leaves == b.leaves and canonical_splits(a) == canonical_splits(b)


# ---------------------------------------------------------------------------
# closest-relative matching


def closest_relative_matching(topology: TreeTopology, subset: Iterable[int]) -> List[Edge]:
    """Pair up an even leaf subset so the connecting paths are edge-disjoint.

    On a tree with internal degree 3 this pairing exists and is unique; it
    is found by walking the tree from an arbitrary leaf root and matching
    the two unpaired leaves that first meet at a node.
    """
    members = sorted(set(subset))
    for v in members:
        if not topology.is_leaf(v):
            raise UnknownLeaf(f"{v} is not a leaf of the tree")
    if len(members) % 2:
        raise OddSubset(f"subset of size {len(members)} cannot be paired")
    if not topology.is_binary():
        raise MalformedTree("matching needs internal degree 3")
    if not members:
        return []
    if len(members) == 2:
        return [edge_key(members[0], members[1])]

    member_set = set(members)
    root = topology.leaves[0]
    order, parent = _postorder(topology, root)
    pairs: List[Edge] = []
    pending: Dict[int, Optional[int]] = {}
    for v in order:
        carried = [v] if (topology.is_leaf(v) and v in member_set) else []
        for w in topology.neighbors(v):
            if w != parent[v] and pending.get(w) is not None:
                carried.append(pending[w])
        while len(carried) >= 2:
            b = carried.pop()
            a = carried.pop()
            pairs.append(edge_key(a, b))
        pending[v] = carried[0] if carried else None
    if pending[root] is not None:
        raise OddSubset("pairing did not close; odd intersection detected")
    return sorted(pairs)


def _postorder(topology: TreeTopology, root: int) -> Tuple[List[int], Dict[int, Optional[int]]]:
    parent: Dict[int, Optional[int]] = {root: None}
    order: List[int] = []
    stack = [root]
    while stack:
        v = stack.pop()
        order.append(v)
        for w in topology.neighbors(v):
            if w not in parent:
                parent[w] = v
                stack.append(w)
    order.reverse()
    return order, parent


# ---------------------------------------------------------------------------
# surgery


def cut_paste(topology: TreeTopology, u: int, v: int, target: Edge) -> TreeTopology:
    """Detach ``u`` (with its side of the tree) from ``v`` and re-attach it
    in the middle of ``target``.

    The edges (u, v) and target = (r, s) are deleted, a fresh node ``t`` is
    added with edges to u, r and s, and degree-2 leftovers are contracted.
    The target edge must lie in v's component once (u, v) is removed.
    """
    if not topology.has_edge(u, v):
        raise InvalidCut(f"({u}, {v}) is not an edge")
    r, s = target
    if not topology.has_edge(r, s):
        raise InvalidCut(f"target ({r}, {s}) is not an edge")
    v_side = component_nodes(topology, v, [(u, v)])
    if r not in v_side or s not in v_side:
        raise InvalidCut(f"target ({r}, {s}) lies in the component being moved")
    t = max(topology.nodes) + 1
    edges = set(topology.edges)
    edges.discard(edge_key(u, v))
    edges.discard(edge_key(r, s))
    edges.update({edge_key(t, u), edge_key(t, r), edge_key(t, s)})
    glued = TreeTopology(topology.leaves, edges)
    return binary(glued)


def induced_subtree(topology: TreeTopology, subset: Iterable[int]) -> TreeTopology:
    """The minimal subtree spanning a leaf subset, with degree-2 nodes contracted."""
    members = sorted(set(subset))
    if len(members) < 2:
        raise TooFewLeaves(f"need at least 2 leaves, got {len(members)}")
    for v in members:
        if not topology.is_leaf(v):
            raise UnknownLeaf(f"{v} is not a leaf of the tree")
    member_set = set(members)
    adjacency = {v: set(ns) for v, ns in topology._adjacency.items()}
    # repeatedly strip non-member fringe nodes
    fringe = deque(v for v, ns in adjacency.items() if len(ns) <= 1 and v not in member_set)
    while fringe:
        v = fringe.popleft()
        if v not in adjacency:
            continue
        for w in adjacency.pop(v):
            adjacency[w].discard(v)
            if len(adjacency[w]) <= 1 and w not in member_set:
                fringe.append(w)
    edges = {edge_key(a, b) for a, ns in adjacency.items() for b in ns}
    pruned = TreeTopology(members, edges)
    return binary(pruned)


def contract_edge(tree, edge: Edge):
    """Contract one edge, merging its endpoints into the lower-numbered one.

    Accepts a :class:`TreeTopology` or a :class:`WeightedTree`; the edge's
    weight (if any) is dropped and all other edges keep theirs.  Leaves may
    not be contracted away.
    """
    weighted = isinstance(tree, WeightedTree)
    topology = tree.topology if weighted else tree
    u, v = edge_key(*edge)
    if not topology.has_edge(u, v):
        raise InvalidCut(f"({u}, {v}) is not an edge")
    if topology.is_leaf(u) or topology.is_leaf(v):
        raise InvalidCut("cannot contract a pendant edge")
    keep, drop = (u, v)
    relabel = lambda x: keep if x == drop else x  # noqa: E731
    edges = {
        edge_key(relabel(a), relabel(b))
        for a, b in topology.edges
        if edge_key(a, b) != (u, v)
    }
    new_topology = TreeTopology(topology.leaves, edges)
    if not weighted:
        return new_topology
    theta = {
        edge_key(relabel(a), relabel(b)): w
        for (a, b), w in tree.theta.items()
        if edge_key(a, b) != (u, v)
    }
    return WeightedTree(new_topology, theta)


# ---------------------------------------------------------------------------
# random instances


def random_topology(n: int, rng: np.random.Generator) -> TreeTopology:
    """Uniform-ish random binary topology grown by splitting random edges."""
    if n < 1:
        raise TooFewLeaves("need at least one leaf")
    if n == 1:
        return TreeTopology([1], [])
    if n == 2:
        return TreeTopology([1, 2], [(1, 2)])
    center = n + 1
    edges = [edge_key(1, center), edge_key(2, center), edge_key(3, center)]
    next_id = n + 2
    for leaf in range(4, n + 1):
        a, b = edges[int(rng.integers(len(edges)))]
        t = next_id
        next_id += 1
        edges.remove(edge_key(a, b))
        edges.extend([edge_key(a, t), edge_key(b, t), edge_key(leaf, t)])
        edges.sort()
    relabel = dict(_renumber(range(1, n + 1), edges))
    return TreeTopology(range(1, n + 1), relabel.values())


def random_weighted_tree(
    n: int,
    rng: np.random.Generator,
    low: float = -1.0,
    high: float = 1.0,
) -> WeightedTree:
    """Random binary topology with i.i.d. uniform edge weights in [low, high]."""
    topology = random_topology(n, rng)
    draws = rng.uniform(low, high, size=len(topology.edges))
    return WeightedTree(topology, dict(zip(topology.edges, draws)))
