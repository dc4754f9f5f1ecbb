"""Tree structure of canonical VC-dimension-1 classes.

On a canonical class whose up-sets are chains, the partial order is a
forest hanging under a virtual root (the empty set). Each node is a
non-constant domain point, each concept's 1-set is a root path, and the
depth of a point equals the length of its chain of strict upper bounds.

The construction packs concept columns into uint64 bitsets so that
superset tests vectorize; building the tree for a few thousand points
takes seconds, and the result is immutable and reusable.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .concepts import ConceptClass, Dataset, NotRealizableError, is_canonical


@dataclass(frozen=True, eq=False)
class ClassTree:
    """The order forest of a canonical class, rooted at a virtual node.

    ``parent[p]`` is ``None`` for children of the root. ``children`` uses
    ``None`` as the root key; child lists are ordered by ascending point id
    for reproducible traversals. ``proper`` is ``None`` until
    :func:`mark_proper` fills it.
    """

    points: tuple[int, ...]
    parent: Mapping[int, int | None]
    children: Mapping[int | None, tuple[int, ...]]
    depth: Mapping[int, int]
    height: int
    proper: Mapping[int, bool] | None = None
    root_proper: bool | None = None

    def is_leaf(self, p: int) -> bool:
        return not self.children.get(p, ())


@dataclass(frozen=True, eq=False)
class SubTree:
    """A pruned descendant tree whose leaves are exactly its proper nodes."""

    root: int
    nodes: frozenset[int]
    children: Mapping[int, tuple[int, ...]]
    leaves: frozenset[int]

    def is_leaf(self, p: int) -> bool:
        return p in self.leaves


@dataclass(frozen=True, eq=False)
class NodeStats:
    """Label-0 example counts against the tree, as multiset counts.

    ``weight[x]`` counts label-0 examples at points order-below-or-equal
    ``x``. ``value[x]``, defined on subtree nodes, counts label-0 examples
    at points on the path from ``x`` (inclusive) up to the subtree root
    (exclusive); it is 0 at the root and nondecreasing toward the leaves.
    ``min_leaf_value[x]`` is the minimum value over leaves below ``x``.
    """

    weight: Mapping[int, int]
    value: Mapping[int, int]
    min_leaf_value: Mapping[int, int]


@dataclass(frozen=True)
class DeterministicSet:
    """Points forced to label 1 by every concept consistent with a sample."""

    points: frozenset[int]
    deepest: int | None
    depth_of_deepest: int


def _column_bits(class_f: ConceptClass) -> tuple[np.ndarray, np.ndarray]:
    """Pack each point's concept column into rows of uint64 words."""
    m = class_f.matrix
    n_concepts, n_points = m.shape
    words = max(1, -(-n_concepts // 64))
    padded = np.zeros((n_points, words * 64), dtype=bool)
    padded[:, :n_concepts] = m.T
    bits = np.packbits(padded, axis=1, bitorder="little")
    bits = bits.view(np.uint64).reshape(n_points, words)
    neg = ~bits
    return bits, neg


def make_tree(class_f: ConceptClass) -> ClassTree:
    """Build the order tree of a canonical class containing the all-zeros concept.

    Each non-constant point appears once; its parent is the closest strict
    upper bound and its depth is the number of points order-above it plus
    one. Raises when some up-set is not totally ordered, which is the
    structural signature of VC dimension >= 2.
    """
    if not is_canonical(class_f):
        raise ValueError("class must be canonical before tree construction")
    if frozenset() not in class_f.concept_index:
        raise ValueError("class must contain the all-zeros concept")

    pts = list(class_f.order_points)
    if not pts:
        return ClassTree(
            points=(), parent={}, children={None: ()}, depth={}, height=0
        )

    bits, neg = _column_bits(class_f)
    idx = np.array(pts, dtype=np.int64)
    sub_bits = bits[idx]
    sub_neg = neg[idx]

    # up_count[i] = number of points (including i) whose column is a superset.
    k = len(pts)
    up_count = np.empty(k, dtype=np.int64)
    for i in range(k):
        # superset of i <=> no concept word has a 1 in i's column missing in theirs
        viol = (sub_bits[i][None, :] & sub_neg).any(axis=1)
        up_count[i] = k - int(viol.sum())

    parent: dict[int, int | None] = {}
    depth: dict[int, int] = {}
    for i in range(k):
        viol = (sub_bits[i][None, :] & sub_neg).any(axis=1)
        sup = ~viol
        sup[i] = False
        depth[pts[i]] = int(up_count[i])
        if not sup.any():
            parent[pts[i]] = None
            continue
        cand = np.nonzero(sup)[0]
        parent[pts[i]] = pts[int(cand[np.argmax(up_count[cand])])]

    # Chain validation: walking parents must visit every strict upper bound.
    for i, p in enumerate(pts):
        length = 0
        q = parent[p]
        while q is not None:
            length += 1
            q = parent[q]
            if length > k:
                raise ValueError("class is not VC-1 tree-structured")
        if length != up_count[i] - 1:
            raise ValueError("class is not VC-1 tree-structured")

    children: dict[int | None, list[int]] = {None: []}
    for p in pts:
        children[p] = []
    for p in pts:
        children[parent[p]].append(p)
    frozen_children = {
        key: tuple(sorted(v)) for key, v in children.items()
    }
    height = max(depth.values())
    return ClassTree(
        points=tuple(pts),
        parent=parent,
        children=frozen_children,
        depth=depth,
        height=height,
    )


def upward_closure(tree: ClassTree, x: int) -> frozenset[int]:
    """The path from ``x`` to the root, excluding the virtual root."""
    if x not in tree.depth:
        raise ValueError(f"point {x} not in tree")
    out = []
    q: int | None = x
    while q is not None:
        out.append(q)
        q = tree.parent[q]
    return frozenset(out)


def mark_proper(class_f: ConceptClass, tree: ClassTree) -> ClassTree:
    """Flag nodes whose root path is realized by some concept.

    The virtual root is proper exactly when the all-zeros concept is
    present, which holds for every representation built from a member
    concept.
    """
    proper = {p: False for p in tree.points}
    bits, neg = _column_bits(class_f)
    root_proper = False
    for c in class_f.concepts:
        if not c.ones:
            root_proper = True
            continue
        members = [p for p in c.ones if p in tree.depth]
        if len(members) != len(c.ones):
            continue  # touches a constant point: not a root path
        deepest = max(members, key=lambda p: tree.depth[p])
        if tree.depth[deepest] != len(c.ones):
            continue
        ys = np.fromiter(c.ones, dtype=np.int64)
        on_path = ~(bits[deepest][None, :] & neg[ys]).any(axis=1)
        if on_path.all():
            proper[deepest] = True
    return replace(tree, proper=proper, root_proper=root_proper)


def make_subtree(tree: ClassTree, x_good: int) -> SubTree:
    """Descendants of ``x_good`` pruned below the first proper node.

    A proper ``x_good`` yields the single-node tree. Otherwise traversal
    stops at each proper node, which becomes a leaf; interior nodes are all
    improper.
    """
    if tree.proper is None:
        raise ValueError("tree must have proper flags; run mark_proper first")
    if x_good not in tree.depth:
        raise ValueError(f"point {x_good} not in tree")
    if tree.proper[x_good]:
        return SubTree(
            root=x_good,
            nodes=frozenset({x_good}),
            children={x_good: ()},
            leaves=frozenset({x_good}),
        )
    nodes = {x_good}
    children: dict[int, tuple[int, ...]] = {}
    leaves = set()
    stack = [x_good]
    while stack:
        p = stack.pop()
        if p != x_good and tree.proper[p]:
            children[p] = ()
            leaves.add(p)
            continue
        kids = tree.children.get(p, ())
        children[p] = kids
        if not kids:
            leaves.add(p)  # unreachable for valid classes: leaves are proper
            continue
        for q in kids:
            nodes.add(q)
            stack.append(q)
    return SubTree(
        root=x_good,
        nodes=frozenset(nodes),
        children=children,
        leaves=frozenset(leaves),
    )


def node_stats(tree: ClassTree, sub: SubTree, dataset: Dataset) -> NodeStats:
    """Per-node label-0 counts for a dataset over the tree's domain.

    Weights aggregate over full-tree descendants; values and leaf minima
    are computed on the subtree only.
    """
    size = max((p for p in tree.depth), default=-1) + 1
    if len(dataset) and len(dataset.points):
        size = max(size, int(dataset.points.max()) + 1)
    counts = np.zeros(size, dtype=np.int64)
    if len(dataset):
        zero_pts = dataset.points[dataset.labels == 0]
        if len(zero_pts):
            # examples at non-tree (constant) points never land on any node
            counts += np.bincount(zero_pts, minlength=size)

    # iterative post-order to avoid recursion limits on deep chains
    weight: dict[int, int] = {}
    order: list[int] = []
    stack = list(tree.children[None])
    while stack:
        p = stack.pop()
        order.append(p)
        stack.extend(tree.children.get(p, ()))
    for p in reversed(order):
        weight[p] = int(counts[p]) + sum(
            weight[q] for q in tree.children.get(p, ())
        )

    value: dict[int, int] = {sub.root: 0}
    stack = [sub.root]
    visit: list[int] = []
    while stack:
        p = stack.pop()
        visit.append(p)
        for q in sub.children.get(p, ()):
            value[q] = value[p] + int(counts[q])
            stack.append(q)

    min_leaf: dict[int, int] = {}
    for p in reversed(visit):
        kids = sub.children.get(p, ())
        if p in sub.leaves:
            min_leaf[p] = value[p]
        else:
            min_leaf[p] = min(min_leaf[q] for q in kids)
    return NodeStats(weight=weight, value=value, min_leaf_value=min_leaf)


def deterministic_points(
    class_f: ConceptClass, dataset: Dataset, *, tree: ClassTree | None = None
) -> DeterministicSet:
    """Points labeled 1 by every concept consistent with the dataset.

    The intersection of the 1-sets of all consistent concepts. Raises
    :class:`NotRealizableError` when no concept is consistent. Passing a
    prebuilt tree avoids recomputing depths.
    """
    m = class_f.matrix
    if len(dataset):
        if dataset.points.max() >= class_f.domain_size:
            raise ValueError("dataset point outside class domain")
        agree = m[:, dataset.points] == (dataset.labels[None, :] != 0)
        consistent = agree.all(axis=1)
    else:
        consistent = np.ones(len(class_f.concepts), dtype=bool)
    if not consistent.any():
        raise NotRealizableError("dataset not realizable by class")
    forced = m[consistent].all(axis=0)
    pts = frozenset(int(p) for p in np.nonzero(forced)[0])
    if not pts:
        return DeterministicSet(points=pts, deepest=None, depth_of_deepest=0)
    if tree is None:
        tree = make_tree(class_f)
    deepest = max(pts, key=lambda p: tree.depth[p])
    return DeterministicSet(
        points=pts, deepest=deepest, depth_of_deepest=tree.depth[deepest]
    )


def tree_to_json(tree: ClassTree) -> dict:
    """Serializable view: one record per node with parent, depth, and flag."""
    nodes = []
    for p in sorted(tree.points):
        nodes.append(
            {
                "point": p,
                "parent": tree.parent[p],
                "depth": tree.depth[p],
                "proper": bool(tree.proper[p]) if tree.proper is not None else None,
            }
        )
    return {"nodes": nodes}


def tree_to_dot(tree: ClassTree) -> str:
    """Graphviz rendering with the virtual root drawn as a point."""
    lines = ["digraph class_tree {", '  root [shape=point, label=""];']
    for p in sorted(tree.points):
        shape = ""
        if tree.proper is not None:
            shape = ', shape=doublecircle' if tree.proper[p] else ", shape=circle"
        lines.append(f'  n{p} [label="x{p} (d={tree.depth[p]})"{shape}];')
    for p in sorted(tree.points):
        par = tree.parent[p]
        src = "root" if par is None else f"n{par}"
        lines.append(f"  {src} -> n{p};")
    lines.append("}")
    return "\n".join(lines)
