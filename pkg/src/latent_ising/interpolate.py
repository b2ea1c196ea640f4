"""Stepwise interpolation between two tree topologies.

The procedure rewrites a source topology into a target by a sequence of
cut-and-paste moves, organized in rounds and epochs: each epoch slides one
node (with its already-finished block) along the path to its partner until
the two become a cherry; each round sweeps the current working set of
blocks.  Per move it records the set of quartets whose induced split
changes, which is exactly the combinatorial quantity the total-variation
localization arguments charge against.

The weaker of the two candidate nodes moves: the side whose strongest
correlation to the future common neighbor is smaller.  That choice is what
keeps every changed quartet close to a tie when the two models have close
correlation vectors.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .errors import (
    AlreadyCherry,
    DimensionMismatch,
    LeafSetMismatch,
    MalformedTree,
    UnknownLeaf,
    UnknownPair,
)
from .trees import (
    CorrelationVector,
    TreeTopology,
    WeightedTree,
    _postorder,
    component_leaves,
    cut_paste,
    edge_key,
    path_nodes,
    quartet_gap,
)

Quartet = Tuple[int, int, int, int]


@dataclass(frozen=True)
class Move:
    """One topology-changing paste step."""

    epoch: int
    round: int
    moved: int  # target-tree node whose block slides
    block: FrozenSet[int]  # leaves carried by the moved block
    anchor: FrozenSet[int]  # leaves of the stationary partner block
    changed_quartets: FrozenSet[Quartet]
    max_gap: float  # largest product gap among the changed quartets


@dataclass(frozen=True)
class InterpolationTrace:
    topologies: Tuple[TreeTopology, ...]
    moves: Tuple[Move, ...]
    epochs: int
    rounds: int

    @property
    def final(self) -> TreeTopology:
        return self.topologies[-1]


def is_cherry(topology: TreeTopology, i: int, j: int) -> bool:
    """True when the two nodes share a common neighbor."""
    if i == j:
        raise UnknownPair(f"cherry query with identical nodes {i}")
    if i not in topology.nodes:
        raise UnknownLeaf(f"node {i} not in tree")
    if j not in topology.nodes:
        raise UnknownLeaf(f"node {j} not in tree")
    return _common_neighbor(topology, i, j) is not None


def _common_neighbor(topology: TreeTopology, i: int, j: int) -> Optional[int]:
    shared = set(topology.neighbors(i)).intersection(topology.neighbors(j))
    return min(shared) if shared else None


def sequence(topology: TreeTopology, i: int, j: int) -> List[TreeTopology]:
    """Successive topologies pasting ``i`` at each path edge toward ``j``.

    The first element re-pastes ``i`` next to its current position and so
    equals the input up to isomorphism; the last has i and j as a cherry.
    """
    nodes = path_nodes(topology, i, j)
    if len(nodes) - 1 < 3:
        raise AlreadyCherry(f"nodes {i} and {j} are already adjacent or a cherry")
    return [
        cut_paste(topology, i, nodes[1], (nodes[r], nodes[r + 1]))
        for r in range(1, len(nodes) - 1)
    ]


def interpolate(
    source: TreeTopology, target: WeightedTree, alpha: CorrelationVector
) -> InterpolationTrace:
    """Transform ``source`` into the target topology move by move.

    The target's weights supply the correlation signal used to pick which
    side of each future cherry moves; ``alpha`` is only consulted to record
    the product gap of each changed quartet for diagnostics.
    """
    target_topology = target.topology
    if source.leaves != target_topology.leaves:
        raise LeafSetMismatch(
            f"leaf sets differ: {source.leaves} vs {target_topology.leaves}"
        )
    if not source.is_binary() or not target_topology.is_binary():
        raise MalformedTree("interpolation needs normalized (degree-3) trees")
    if tuple(sorted(alpha.labels)) != source.leaves:
        raise DimensionMismatch("correlation vector covers a different leaf set")

    topologies: List[TreeTopology] = [source]
    moves: List[Move] = []
    current = source
    epochs = 0
    rounds = 0
    n = source.leaf_count
    if n >= 4:
        working = set(source.leaves)
        block: Dict[int, FrozenSet[int]] = {leaf: frozenset([leaf]) for leaf in source.leaves}
        while len(working) >= 4:
            rounds += 1
            snapshot = sorted(working)
            for i, j in itertools.combinations(snapshot, 2):
                if i not in working or j not in working:
                    continue
                p = _common_neighbor(target_topology, i, j)
                if p is None:
                    continue
                if not _blocks_adjacent(current, block[i], block[j]):
                    mover, anchor = _pick_weaker(target, block, i, j, p)
                    epochs += 1
                    current = _run_epoch(
                        current,
                        block[mover],
                        block[anchor],
                        alpha,
                        epochs,
                        rounds,
                        mover,
                        topologies,
                        moves,
                    )
                working.discard(i)
                working.discard(j)
                working.add(p)
                block[p] = block[i] | block[j]
    return InterpolationTrace(
        topologies=tuple(topologies),
        moves=tuple(moves),
        epochs=epochs,
        rounds=rounds,
    )


def _signal(target: WeightedTree, u: int, p: int) -> float:
    """|product of target weights| along the path from u to p."""
    if u == p:
        return 1.0
    nodes = path_nodes(target.topology, u, p)
    out = 1.0
    for a, b in zip(nodes, nodes[1:]):
        out *= abs(target.weight(a, b))
    return out


def _pick_weaker(
    target: WeightedTree, block: Dict[int, FrozenSet[int]], i: int, j: int, p: int
) -> Tuple[int, int]:
    """Return (mover, anchor): the side with the weaker peak signal to p moves.

    Ties do not switch, so the lexicographically first candidate moves.
    """
    peak_i = max(_signal(target, u, p) for u in sorted(block[i]))
    peak_j = max(_signal(target, u, p) for u in sorted(block[j]))
    if peak_i > peak_j:
        return j, i
    return i, j


def _block_root(topology: TreeTopology, leaves: FrozenSet[int]) -> int:
    """The node whose detached component holds exactly the given leaves."""
    if len(leaves) == 1:
        return next(iter(leaves))
    order, parent = _postorder(topology, topology.leaves[0])
    below: Dict[int, frozenset] = {}
    for v in order:
        acc = {v} if topology.is_leaf(v) else set()
        for w in topology.neighbors(v):
            if w != parent[v]:
                acc.update(below[w])
        below[v] = frozenset(acc)
    all_leaves = frozenset(topology.leaves)
    for v in order:
        if parent[v] is None:
            continue
        if below[v] == leaves:
            return v
        if all_leaves - below[v] == leaves:
            return parent[v]
    raise MalformedTree(f"no edge detaches exactly the block {sorted(leaves)}")


def _blocks_adjacent(topology: TreeTopology, a: FrozenSet[int], b: FrozenSet[int]) -> bool:
    ra = _block_root(topology, a)
    rb = _block_root(topology, b)
    return _common_neighbor(topology, ra, rb) is not None


def _run_epoch(
    current: TreeTopology,
    mover_block: FrozenSet[int],
    anchor_block: FrozenSet[int],
    alpha: CorrelationVector,
    epoch: int,
    round_: int,
    mover: int,
    topologies: List[TreeTopology],
    moves: List[Move],
) -> TreeTopology:
    ra = _block_root(current, mover_block)
    rb = _block_root(current, anchor_block)
    nodes = path_nodes(current, ra, rb)
    length = len(nodes) - 1  # >= 3: blocks are not adjacent and not a cherry
    path_edges = [edge_key(a, b) for a, b in zip(nodes, nodes[1:])]
    side_i = component_leaves(current, ra, [path_edges[0]])
    side_j = component_leaves(current, rb, [path_edges[-1]])
    hanging = {
        q: sorted(component_leaves(current, nodes[q], path_edges))
        for q in range(1, length)
    }
    steps = [
        cut_paste(current, ra, nodes[1], (nodes[r], nodes[r + 1]))
        for r in range(1, length)
    ]
    for k in range(1, length - 1):
        left = [u for q in range(1, k + 1) for u in hanging[q]]
        middle = hanging[k + 1]
        right = [u for q in range(k + 2, length) for u in hanging[q]]
        right.extend(sorted(side_j))
        changed = frozenset(
            tuple(sorted((w, z, y, u)))
            for w in sorted(side_i)
            for z in left
            for y in middle
            for u in right
        )
        max_gap = max((quartet_gap(alpha, q) for q in changed), default=0.0)
        moves.append(
            Move(
                epoch=epoch,
                round=round_,
                moved=mover,
                block=mover_block,
                anchor=anchor_block,
                changed_quartets=changed,
                max_gap=max_gap,
            )
        )
        topologies.append(steps[k])
    return steps[length - 2]


def trace_to_json(trace: InterpolationTrace) -> dict:
    """JSON-friendly summary: per-move changed-quartet sizes and bounds."""
    return {
        "epochs": trace.epochs,
        "rounds": trace.rounds,
        "moves": [
            {
                "epoch": m.epoch,
                "round": m.round,
                "moved": m.moved,
                "block": sorted(m.block),
                "changed_quartets": len(m.changed_quartets),
                "max_gap": m.max_gap,
            }
            for m in trace.moves
        ],
        "total_changed_quartets": sum(len(m.changed_quartets) for m in trace.moves),
    }
