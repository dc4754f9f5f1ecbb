"""Private PAC learners for canonical VC-dimension-1 classes.

Two learners share a pipeline: represent the class relative to a member
concept, rebuild the order tree, and privately locate a node whose root
path back-transforms to an accurate hypothesis.

* :func:`improper_learn` partitions the sample, summarizes each subset by
  its deepest forced point, takes a private median of those depths, and
  privately selects among the points at the median depth. Its output may
  fall outside the class.
* :func:`proper_learn` runs the improper stage on one slice of the data
  and, when the selected node's path is not realized by a class member,
  descends the pruned subtree with noisy weight tests and exponential
  mechanisms until a realized leaf is reached. Its output is always a
  class member.

Both return full execution traces so that statistical tests can inspect
every intermediate quantity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .concepts import (
    Concept,
    ConceptClass,
    Dataset,
    Hypothesis,
    NotRealizableError,
    canonicalize,
    f_represent,
    is_canonical,
)
from .mechanisms import (
    ChoosingInstance,
    PrivacyParams,
    advanced_composition,
    choosing_mechanism,
    exponential_mechanism,
    laplace_sample,
    private_median,
    required_median_size,
)
from .tree import ClassTree, SubTree, make_subtree, make_tree, mark_proper, node_stats, upward_closure


@dataclass(frozen=True)
class BudgetConstants:
    """Multipliers behind every asymptotic term in the sizing formulas.

    Defaults: the selection gate constant 16, a unit multiplier on the
    second-stage size, and a 1/3 target for the depth median. All logs in
    the sizing formulas are natural.
    """

    gate: float = 16.0
    n2_scale: float = 1.0
    median_alpha: float = 1.0 / 3.0


@dataclass(frozen=True)
class LearnParams:
    """Accuracy (alpha), confidence (beta), and per-mechanism privacy knobs."""

    alpha: float
    beta: float
    privacy: PrivacyParams
    constants: BudgetConstants = field(default_factory=BudgetConstants)

    def __post_init__(self) -> None:
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if not 0 < self.beta < 1:
            raise ValueError("beta must be in (0, 1)")


@dataclass(frozen=True)
class SampleBudget:
    """Derived sample sizes: subset count, stage sizes, and loop bound."""

    t: int
    N1: int
    N2: int
    T: int
    per_subset: int


def uniform_convergence_size(alpha: float, beta: float) -> int:
    """Examples per subset so empirical alpha/10-agreement implies alpha accuracy.

    The classical uniform-convergence bound for a VC-dimension-1 class:
    ``(48 / alpha) * (10 * ln(48 e / alpha) + ln(5 / beta))``.
    """
    return math.ceil(
        (48.0 / alpha) * (10.0 * math.log(48.0 * math.e / alpha) + math.log(5.0 / beta))
    )


def sample_budget(params: LearnParams, tree_depth_bound: int) -> SampleBudget:
    """Sizing for a class whose tree depth is at most ``tree_depth_bound``.

    The subset count ``t`` is the larger of the private-median requirement
    on the depth domain and the selection gate requirement
    ``(gate / eps) * ln(4 t / (beta eps delta))``, the latter solved by
    iterating the max to its fixed point. ``N1 = t * per_subset`` and
    ``N2 = n2_scale * (ln(1/alpha) + ln(1/beta)) / (alpha^2 eps)``.
    """
    if tree_depth_bound < 0:
        raise ValueError("tree_depth_bound must be nonnegative")
    priv = params.privacy
    if priv.delta <= 0:
        raise ValueError("learners require delta > 0")
    consts = params.constants
    t_median = required_median_size(
        tree_depth_bound + 1, consts.median_alpha, params.beta, priv
    )

    def gate(t: int) -> int:
        return math.ceil(
            (consts.gate / priv.epsilon)
            * math.log(4.0 * max(t, 1) / (params.beta * priv.epsilon * priv.delta))
        )

    t = max(t_median, 1)
    while True:
        t_next = max(t_median, gate(t))
        if t_next <= t:
            break
        t = t_next

    per_subset = uniform_convergence_size(params.alpha, params.beta)
    n2 = math.ceil(
        consts.n2_scale
        * (math.log(1.0 / params.alpha) + math.log(1.0 / params.beta))
        / (params.alpha**2 * priv.epsilon)
    )
    return SampleBudget(
        t=t,
        N1=t * per_subset,
        N2=n2,
        T=math.ceil(2.0 / params.alpha),
        per_subset=per_subset,
    )


def partition(dataset: Dataset, t: int, rng: np.random.Generator) -> list[Dataset]:
    """Shuffle and deal the dataset round-robin into ``t`` subsets.

    Subset sizes differ by at most one and the union recovers the input as
    a multiset.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    if len(dataset) < t:
        raise ValueError("dataset smaller than the number of subsets")
    perm = rng.permutation(len(dataset))
    return [
        Dataset(
            dataset.points[perm[i::t]],
            dataset.labels[perm[i::t]],
            dataset.realizable_by,
        )
        for i in range(t)
    ]


@dataclass(frozen=True, eq=False)
class LearnerContext:
    """Precomputed representation shared by every run on one class.

    Holds the member concept used for relabeling, the canonical
    representation with its point map, the marked order tree, and float
    copies of the concept matrix for the batched consistency tests.
    Building it once and passing it to the learners amortizes the tree
    construction across repeated runs.
    """

    base: ConceptClass
    f_index: int
    f: Concept
    class_f: ConceptClass
    point_map: np.ndarray
    tree: ClassTree

    @cached_property
    def f_row(self) -> np.ndarray:
        row = np.zeros(self.base.domain_size, dtype=np.uint8)
        if self.f.ones:
            row[list(self.f.ones)] = 1
        row.flags.writeable = False
        return row

    @cached_property
    def ones_f32(self) -> np.ndarray:
        return self.class_f.matrix.astype(np.float32)

    @cached_property
    def zeros_f32(self) -> np.ndarray:
        return (~self.class_f.matrix).astype(np.float32)

    @cached_property
    def zeros_f32_t(self) -> np.ndarray:
        return np.ascontiguousarray(self.zeros_f32.T)

    @cached_property
    def ones_f32_t(self) -> np.ndarray:
        return np.ascontiguousarray(self.ones_f32.T)

    @cached_property
    def depth_vec(self) -> np.ndarray:
        d = np.zeros(self.class_f.domain_size, dtype=np.int64)
        for p, dep in self.tree.depth.items():
            d[p] = dep
        d.flags.writeable = False
        return d

    @cached_property
    def points_at_depth(self) -> dict[int, tuple[int, ...]]:
        out: dict[int, list[int]] = {}
        for p, dep in self.tree.depth.items():
            out.setdefault(dep, []).append(p)
        return {d: tuple(sorted(v)) for d, v in out.items()}


def prepare_context(cls: ConceptClass, f_index: int | None = None) -> LearnerContext:
    """Build the reusable learner context for a canonical class.

    ``f_index`` picks the member concept the class is represented against;
    the default is the first concept, and the learners' guarantees do not
    depend on the choice. The represented class is re-canonicalized since
    the transform can collapse point columns, and the composed point map
    carries datasets onto the operational domain.
    """
    if not is_canonical(cls):
        raise ValueError("learners require a canonical class; call canonicalize first")
    if f_index is None:
        f_index = 0
    if not 0 <= f_index < len(cls.concepts):
        raise ValueError("f_index out of range")
    f = cls.concepts[f_index]
    class_f, point_map = canonicalize(f_represent(cls, f))
    tree = mark_proper(class_f, make_tree(class_f))
    return LearnerContext(
        base=cls,
        f_index=f_index,
        f=f,
        class_f=class_f,
        point_map=point_map,
        tree=tree,
    )


@dataclass(frozen=True, eq=False)
class ImproperTrace:
    """Everything the improper pipeline computed, for inspection and tests."""

    reference_concept: Concept
    reference_index: int
    subset_depths: tuple[int, ...]
    subset_deepest: tuple[int | None, ...]
    median_depth: int
    candidates: tuple[int, ...]
    scores: tuple[int, ...]
    chosen_point: int | None  # None when the selection abstained (root fallback)
    hypothesis: Hypothesis

    def to_json(self) -> dict:
        return {
            "reference_concept": {
                "id": self.reference_concept.id,
                "ones": sorted(self.reference_concept.ones),
            },
            "reference_index": self.reference_index,
            "subset_depths": list(self.subset_depths),
            "subset_deepest": list(self.subset_deepest),
            "median_depth": self.median_depth,
            "candidates": list(self.candidates),
            "scores": list(self.scores),
            "chosen_point": self.chosen_point,
            "hypothesis": {
                "ones": sorted(self.hypothesis.ones),
                "proper_index": self.hypothesis.proper_index,
            },
        }


@dataclass(frozen=True, eq=False)
class ProperTrace:
    """Improper stage output plus the subtree descent path."""

    chosen_point: int | None
    subtree: SubTree | None
    path: tuple[tuple[int, str, int], ...]  # (node, case, selected child)
    leaf: int | None
    hypothesis: Hypothesis
    stage1: ImproperTrace | None = None

    def to_json(self) -> dict:
        return {
            "chosen_point": self.chosen_point,
            "subtree": None
            if self.subtree is None
            else {
                "root": self.subtree.root,
                "nodes": sorted(self.subtree.nodes),
                "leaves": sorted(self.subtree.leaves),
            },
            "path": [list(step) for step in self.path],
            "leaf": self.leaf,
            "hypothesis": {
                "ones": sorted(self.hypothesis.ones),
                "proper_index": self.hypothesis.proper_index,
            },
            "stage1": self.stage1.to_json() if self.stage1 is not None else None,
        }


def _transform_dataset(ctx: LearnerContext, dataset: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Relabel against the reference concept and map points onto the operational domain."""
    if len(dataset) and dataset.points.max() >= ctx.base.domain_size:
        raise ValueError("dataset point outside class domain")
    labels = dataset.labels ^ ctx.f_row[dataset.points]
    points = ctx.point_map[dataset.points]
    return points, labels


def _subset_summaries(
    ctx: LearnerContext, subsets: Sequence[tuple[np.ndarray, np.ndarray]]
) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic-point masks and deepest depths for many subsets at once.

    Returns ``(forced, depths)`` where ``forced[i, p]`` says point ``p`` is
    labeled 1 by every concept consistent with subset ``i`` and
    ``depths[i]`` is the largest tree depth among them (0 when none).
    Raises when some subset is inconsistent with every concept.
    """
    t = len(subsets)
    n = ctx.class_f.domain_size
    present1 = np.zeros((t, n), dtype=np.float32)
    present0 = np.zeros((t, n), dtype=np.float32)
    for i, (pts, labs) in enumerate(subsets):
        pos = labs != 0
        if pos.any():
            present1[i] = np.bincount(pts[pos], minlength=n) > 0
        if (~pos).any():
            present0[i] = np.bincount(pts[~pos], minlength=n) > 0
    # concept violates subset iff it gives 0 to a 1-labeled point or vice versa
    viol = present1 @ ctx.zeros_f32_t + present0 @ ctx.ones_f32_t
    consistent = viol < 0.5
    if not consistent.any(axis=1).all():
        raise NotRealizableError("dataset not realizable by class")
    # a point is forced iff no consistent concept assigns it 0
    zero_hits = consistent.astype(np.float32) @ ctx.zeros_f32
    forced = zero_hits < 0.5
    depths = (forced * ctx.depth_vec).max(axis=1) if n else np.zeros(t, dtype=np.int64)
    return forced, depths.astype(np.int64)


def _back_transform(ctx: LearnerContext, ones_f: frozenset[int]) -> Hypothesis:
    """Lift a 1-set on the operational domain back to a hypothesis on the input domain."""
    n_op = ctx.class_f.domain_size
    row = np.zeros(n_op, dtype=np.uint8)
    if ones_f:
        row[list(ones_f)] = 1
    values = row[ctx.point_map] ^ ctx.f_row
    ones = frozenset(int(p) for p in np.nonzero(values)[0])
    return Hypothesis(ones=ones, proper_index=ctx.base.concept_index.get(ones))


def improper_learn(
    cls: ConceptClass,
    dataset: Dataset | None,
    params: LearnParams,
    rng: np.random.Generator,
    *,
    context: LearnerContext | None = None,
    f_index: int | None = None,
    subsets: Sequence[Dataset] | None = None,
    force_median: int | None = None,
    greedy: bool = False,
) -> ImproperTrace:
    """Privately learn a hypothesis that may fall outside the class.

    One run spends (2 eps, 2 delta): an (eps, delta) private median of the
    per-subset depths plus an (eps, delta) bounded-quality selection among
    the points at that depth. Given the budgeted sample size the output is
    alpha-accurate with probability about 1 - (t + 2) beta; with fewer
    examples the subset count is capped at the sample size, which keeps
    the privacy guarantee and voids the accuracy one.

    Keyword-only hooks exist for tests and pipelines: ``subsets`` bypasses
    partitioning, ``force_median`` pins the median outcome,
    ``greedy`` replaces each mechanism by its utility-optimal branch, and
    ``context``/``f_index`` control the shared representation.
    """
    ctx = context if context is not None else prepare_context(cls, f_index)
    if ctx.base is not cls and ctx.base != cls:
        raise ValueError("context was prepared for a different class")

    if subsets is None:
        if dataset is None or len(dataset) == 0:
            raise ValueError("dataset must be non-empty")
        budget = sample_budget(params, ctx.tree.height)
        t = min(budget.t, len(dataset))
        subsets = partition(dataset, t, rng)
    elif not subsets:
        raise ValueError("at least one subset required")

    transformed = [_transform_dataset(ctx, s) for s in subsets]
    forced, depths = _subset_summaries(ctx, transformed)
    t = len(subsets)

    deepest: list[int | None] = []
    for i in range(t):
        if depths[i] == 0:
            deepest.append(None)
        else:
            row = forced[i] & (ctx.depth_vec == depths[i])
            deepest.append(int(np.nonzero(row)[0][0]))

    if force_median is not None:
        z = int(force_median)
    else:
        z = private_median(
            [int(d) for d in depths],
            ctx.tree.height,
            params.constants.median_alpha,
            params.privacy,
            params.beta,
            rng,
        )

    candidates = ctx.points_at_depth.get(z, ())
    if candidates:
        active = depths >= z
        scores = tuple(
            int((forced[active, p]).sum()) for p in candidates
        )
    else:
        scores = ()

    inst = ChoosingInstance(
        scores=dict(zip(candidates, scores)), k=1, n=t
    )
    if greedy:
        best = max(scores, default=0)
        chosen = None
        if best > 0:
            chosen = candidates[scores.index(best)]
    else:
        chosen = choosing_mechanism(inst, params.privacy, params.beta, rng)

    closure = (
        upward_closure(ctx.tree, chosen) if chosen is not None else frozenset()
    )
    hypothesis = _back_transform(ctx, closure)
    return ImproperTrace(
        reference_concept=ctx.f,
        reference_index=ctx.f_index,
        subset_depths=tuple(int(d) for d in depths),
        subset_deepest=tuple(deepest),
        median_depth=z,
        candidates=tuple(candidates),
        scores=scores,
        chosen_point=chosen,
        hypothesis=hypothesis,
    )


def _min_id_leaf(sub: SubTree, node: int) -> int:
    """The smallest-id leaf below ``node`` in the subtree (deterministic pick)."""
    best: int | None = None
    stack = [node]
    while stack:
        p = stack.pop()
        kids = sub.children.get(p, ())
        if p in sub.leaves or not kids:
            if best is None or p < best:
                best = p
            continue
        stack.extend(kids)
    assert best is not None
    return best


def proper_learn(
    cls: ConceptClass,
    dataset: Dataset | None,
    params: LearnParams,
    rng: np.random.Generator,
    *,
    context: LearnerContext | None = None,
    f_index: int | None = None,
    stage1_subsets: Sequence[Dataset] | None = None,
    stage2: Dataset | None = None,
    force_chosen_point: int | None = None,
    force_median: int | None = None,
    greedy: bool = False,
) -> ProperTrace:
    """Privately learn a hypothesis that is always a class member.

    Splits the sample, runs the improper stage on the first part, and
    returns immediately when the selected node's root path is realized by
    a concept. Otherwise it walks the pruned subtree for at most
    ``ceil(2/alpha)`` iterations: each pass draws a Laplace-noised minimum
    child weight and either selects a light child by weight (stopping) or
    descends by minimum leaf value, both via the exponential mechanism.
    The final hypothesis is the smallest-id realized leaf's path.

    ``stage1_subsets``/``stage2`` bypass the internal split and
    ``force_chosen_point`` skips the improper stage; see
    :func:`improper_learn` for the remaining hooks.
    """
    ctx = context if context is not None else prepare_context(cls, f_index)
    budget = sample_budget(params, ctx.tree.height)

    if stage2 is None:
        if dataset is None or len(dataset) == 0:
            raise ValueError("dataset must be non-empty")
        n2 = min(budget.N2, len(dataset) // 2)
        perm = rng.permutation(len(dataset))
        s2_idx, s1_idx = perm[:n2], perm[n2:]
        stage2 = Dataset(
            dataset.points[s2_idx], dataset.labels[s2_idx], dataset.realizable_by
        )
        stage1: Dataset | None = Dataset(
            dataset.points[s1_idx], dataset.labels[s1_idx], dataset.realizable_by
        )
    else:
        stage1 = dataset

    trace1: ImproperTrace | None = None
    if force_chosen_point is not None:
        chosen: int | None = force_chosen_point
    else:
        trace1 = improper_learn(
            cls,
            stage1,
            params,
            rng,
            context=ctx,
            subsets=stage1_subsets,
            force_median=force_median,
            greedy=greedy,
        )
        chosen = trace1.chosen_point

    assert ctx.tree.proper is not None
    if chosen is None or ctx.tree.proper[chosen]:
        closure = upward_closure(ctx.tree, chosen) if chosen is not None else frozenset()
        hypothesis = _back_transform(ctx, closure)
        assert hypothesis.proper_index is not None
        return ProperTrace(
            chosen_point=chosen,
            subtree=None,
            path=(),
            leaf=chosen,
            hypothesis=hypothesis,
            stage1=trace1,
        )

    pts2, labs2 = _transform_dataset(ctx, stage2)
    sub = make_subtree(ctx.tree, chosen)
    stats = node_stats(ctx.tree, sub, Dataset(pts2, labs2))
    n2_size = len(stage2)
    eps = params.privacy.epsilon

    flag = chosen
    path: list[tuple[int, str, int]] = []
    for _ in range(budget.T):
        kids = sub.children.get(flag, ())
        if not kids:
            break
        w_min = min(stats.weight[q] for q in kids)
        noisy = w_min if greedy else w_min + laplace_sample(1.0 / eps, rng)
        if noisy <= params.alpha * n2_size:
            cands = [(q, -float(stats.weight[q])) for q in kids]
            if greedy:
                nxt = min(kids, key=lambda q: (stats.weight[q], q))
            else:
                nxt = int(exponential_mechanism(cands, 1.0, eps, rng))
            path.append((flag, "nonuniform", nxt))
            flag = nxt
            break
        cands = [(q, -float(stats.min_leaf_value[q])) for q in kids]
        if greedy:
            nxt = min(kids, key=lambda q: (stats.min_leaf_value[q], q))
        else:
            nxt = int(exponential_mechanism(cands, 1.0, eps, rng))
        path.append((flag, "uniform", nxt))
        flag = nxt

    leaf = _min_id_leaf(sub, flag)
    hypothesis = _back_transform(ctx, upward_closure(ctx.tree, leaf))
    assert hypothesis.proper_index is not None
    return ProperTrace(
        chosen_point=chosen,
        subtree=sub,
        path=tuple(path),
        leaf=leaf,
        hypothesis=hypothesis,
        stage1=trace1,
    )


def total_privacy(
    params: LearnParams,
    budget: SampleBudget,
    delta_prime: float | None = None,
    loop_iterations: int | None = None,
) -> PrivacyParams:
    """End-to-end budget of the proper learner.

    The improper stage costs (2 eps, 2 delta). Each descent iteration runs
    one Laplace test and one exponential mechanism, each eps-DP, so the
    loop composes to ``(sqrt(2 T ln(1/delta')) * 2 eps, delta')`` by
    advanced composition; the stages then add. ``loop_iterations``
    defaults to the budget's worst-case bound, and 0 gives the
    proper-exit path cost (2 eps, 2 delta) exactly.
    """
    t_loop = budget.T if loop_iterations is None else loop_iterations
    if t_loop < 0:
        raise ValueError("loop_iterations must be nonnegative")
    eps = params.privacy.epsilon
    delta = params.privacy.delta
    if t_loop == 0:
        return PrivacyParams(epsilon=2.0 * eps, delta=2.0 * delta)
    if delta_prime is None:
        delta_prime = delta
    loop = advanced_composition(2.0 * eps, 0.0, t_loop, delta_prime)
    return PrivacyParams(
        epsilon=2.0 * eps + loop.epsilon, delta=2.0 * delta + loop.delta
    )
