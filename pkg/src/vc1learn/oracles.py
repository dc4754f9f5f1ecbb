"""Brute-force ground truth: combinatorial dimensions, exact errors, auditing.

Everything here is deliberately independent of the main code paths it
checks: dimensions by exhaustive enumeration, deterministic points by the
literal definition, and privacy by frequency estimation over repeated
mechanism runs. All oracles are exponential by design and guarded to desk
scale.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

import numpy as np
from scipy.stats import beta as beta_dist

from .concepts import Concept, ConceptClass, Dataset, Hypothesis, NotRealizableError

VC_SCALE_LIMIT = 24
TD_SCALE_LIMIT = 16


@dataclass(frozen=True)
class DimensionReport:
    """Exact combinatorial dimensions of one class."""

    vc: int
    littlestone: int
    thresholds: int


@dataclass(frozen=True, eq=False)
class Distribution:
    """A probability distribution over domain points."""

    weights: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or len(w) == 0:
            raise ValueError("weights must be a non-empty 1-d array")
        if w.min() < 0:
            raise ValueError("weights must be nonnegative")
        if abs(w.sum() - 1.0) > 1e-12:
            raise ValueError("weights must sum to 1 within 1e-12")
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, n: int) -> "Distribution":
        return cls(np.full(n, 1.0 / n))

    def __len__(self) -> int:
        return len(self.weights)


def _guard(cls: ConceptClass, limit: int) -> None:
    if cls.domain_size > limit:
        raise ValueError("oracle scale exceeded")


def vc_dimension(cls: ConceptClass) -> int:
    """Exact VC dimension by subset enumeration.

    Scans subset sizes upward and stops at the first size with no
    shattered subset.
    """
    _guard(cls, VC_SCALE_LIMIT)
    m = cls.matrix
    n = cls.domain_size
    max_possible = min(n, max(len(cls.concepts).bit_length() - 1, 0))
    vc = 0
    for k in range(1, max_possible + 1):
        powers = 1 << np.arange(k)
        shattered = False
        for subset in itertools.combinations(range(n), k):
            codes = m[:, subset].astype(np.int64) @ powers
            if len(np.unique(codes)) == 1 << k:
                shattered = True
                break
        if not shattered:
            return vc
        vc = k
    return vc


def _ldim(concepts: frozenset[int], n: int, memo: dict[frozenset[int], int]) -> int:
    if len(concepts) <= 1:
        return 0
    cached = memo.get(concepts)
    if cached is not None:
        return cached
    best = 0
    for x in range(n):
        bit = 1 << x
        with_one = frozenset(c for c in concepts if c & bit)
        if not with_one or len(with_one) == len(concepts):
            continue
        without = concepts - with_one
        best = max(
            best,
            1 + min(_ldim(without, n, memo), _ldim(with_one, n, memo)),
        )
    memo[concepts] = best
    return best


def littlestone_dimension(cls: ConceptClass) -> int:
    """Exact mistake-bound dimension by memoized label-restriction recursion.

    Zero for classes of at most one concept; otherwise one plus the best
    min over the two label restrictions of a splitting point.
    """
    _guard(cls, VC_SCALE_LIMIT)
    masks = frozenset(
        sum(1 << p for p in c.ones) for c in cls.concepts
    )
    return _ldim(masks, cls.domain_size, {})


def thresholds_dimension(cls: ConceptClass) -> int:
    """Length of the longest threshold pattern, by backtracking search.

    Searches for points x_1..x_k and concepts c_1..c_k with
    ``c_i(x_j) = 1`` exactly when ``j >= i``.
    """
    _guard(cls, TD_SCALE_LIMIT)
    concept_masks = sorted(
        {sum(1 << p for p in c.ones) for c in cls.concepts}, reverse=True
    )
    full = (1 << cls.domain_size) - 1

    def dfs(prev_points: int, allowed: int, depth: int) -> int:
        best = depth
        for cmask in concept_masks:
            if cmask & prev_points:
                continue
            frontier = allowed & cmask
            while frontier:
                xbit = frontier & -frontier
                frontier ^= xbit
                best = max(
                    best, dfs(prev_points | xbit, allowed & cmask, depth + 1)
                )
        return best

    return dfs(0, full, 0)


def floor_log2(value: int) -> int:
    """Floor of log2 for the dimension sandwich; 0 by convention at 0."""
    return value.bit_length() - 1 if value >= 1 else 0


def dimension_report(cls: ConceptClass) -> DimensionReport:
    return DimensionReport(
        vc=vc_dimension(cls),
        littlestone=littlestone_dimension(cls),
        thresholds=thresholds_dimension(cls),
    )


def error_on_distribution(
    hypothesis: Hypothesis | Concept, concept: Concept, dist: Distribution
) -> float:
    """Probability mass of the symmetric difference of the two 1-sets."""
    diff = hypothesis.ones ^ concept.ones
    if not diff:
        return 0.0
    idx = np.fromiter(diff, dtype=np.int64)
    if idx.max() >= len(dist.weights):
        raise ValueError("point outside distribution support")
    return float(dist.weights[idx].sum())


def error_on_sample(hypothesis: Hypothesis | Concept, dataset: Dataset) -> float:
    """Fraction of examples whose label disagrees with the hypothesis."""
    if len(dataset) == 0:
        raise ValueError("empty dataset")
    ones = hypothesis.ones
    preds = np.fromiter(
        (1 if int(p) in ones else 0 for p in dataset.points),
        dtype=np.uint8,
        count=len(dataset),
    )
    return float(np.mean(preds != dataset.labels))


def deterministic_oracle(class_f: ConceptClass, dataset: Dataset) -> frozenset[int]:
    """Literal definition: intersect the 1-sets of all consistent concepts."""
    pairs = dataset.pairs()
    consistent = [
        c
        for c in class_f.concepts
        if all(c(x) == y for x, y in pairs)
    ]
    if not consistent:
        raise NotRealizableError("dataset not realizable by class")
    forced = set(consistent[0].ones)
    for c in consistent[1:]:
        forced &= c.ones
    return frozenset(forced)


def _clopper_pearson(successes: int, trials: int, tail: float) -> tuple[float, float]:
    """Two-sided Clopper-Pearson interval at per-bound tail probability."""
    if successes > 0:
        lo = float(beta_dist.ppf(tail, successes, trials - successes + 1))
    else:
        lo = 0.0
    if successes < trials:
        hi = float(beta_dist.ppf(1.0 - tail, successes + 1, trials - successes))
    else:
        hi = 1.0
    return lo, hi


def _direction_bound(
    counts_a: Counter,
    counts_b: Counter,
    trials: int,
    delta: float,
    outcomes: Sequence[Hashable],
    tail: float,
) -> float:
    """Best confident lower bound on the privacy loss from A toward B."""
    ranked = sorted(
        outcomes,
        key=lambda o: (counts_a[o] + 1e-9) / (counts_b[o] + 1e-9),
        reverse=True,
    )
    best = -math.inf
    cum_a = 0
    cum_b = 0
    for o in ranked:
        cum_a += counts_a[o]
        cum_b += counts_b[o]
        p_lo, _ = _clopper_pearson(cum_a, trials, tail)
        _, q_hi = _clopper_pearson(cum_b, trials, tail)
        numer = p_lo - delta
        if numer <= 0:
            continue
        best = max(best, math.log(numer / max(q_hi, 1e-300)))
    return best


def dp_audit(
    mechanism: Callable[[Dataset, np.random.Generator], Hashable],
    data_a: Dataset,
    data_b: Dataset,
    trials: int,
    delta: float,
    rng: np.random.Generator,
    *,
    confidence: float = 0.99,
    bins: int = 64,
) -> float:
    """Statistical lower bound on the privacy loss between two neighbors.

    Runs the mechanism ``trials`` times on each dataset, estimates outcome
    probabilities, and maximizes ``ln((P[A in E] - delta) / P[B in E])``
    over ratio-ordered prefix events in both directions, with
    Clopper-Pearson confidence adjustment (Bonferroni-corrected across the
    tested events). The result refutes a claimed budget only when it
    exceeds the claimed epsilon; it can never certify privacy. Real-valued
    outcomes are discretized into quantile bins first.
    """
    if trials <= 0:
        raise ValueError("trials must be positive")
    rng_a, rng_b = rng.spawn(2)
    out_a = [mechanism(data_a, rng_a) for _ in range(trials)]
    out_b = [mechanism(data_b, rng_b) for _ in range(trials)]

    if out_a and isinstance(out_a[0], (float, np.floating)):
        pooled = np.asarray(out_a + out_b, dtype=np.float64)
        edges = np.quantile(pooled, np.linspace(0.0, 1.0, bins + 1)[1:-1])
        out_a = [int(v) for v in np.digitize(out_a, edges)]
        out_b = [int(v) for v in np.digitize(out_b, edges)]

    counts_a = Counter(out_a)
    counts_b = Counter(out_b)
    outcomes = sorted(set(counts_a) | set(counts_b), key=repr)
    # two directions, prefix events per outcome, two CP bounds per event
    tail = (1.0 - confidence) / max(1, 4 * len(outcomes))
    best = max(
        _direction_bound(counts_a, counts_b, trials, delta, outcomes, tail),
        _direction_bound(counts_b, counts_a, trials, delta, outcomes, tail),
    )
    return max(0.0, best)
