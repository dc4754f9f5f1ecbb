"""Ready-made neighboring-dataset scenarios for the privacy auditor.

Each builder returns ``(mechanism, data_a, data_b, claimed)``: an opaque
randomized map from datasets to finite outcomes, two datasets differing in
one entry, and the budget the mechanism is supposed to satisfy. The
randomized-response scenario has analytically known outcome probabilities
and calibrates the auditor itself.
"""

from __future__ import annotations

import math
from typing import Callable, Hashable

import numpy as np

from .concepts import ConceptClass, Dataset
from .generators import example_class
from .learners import LearnParams, LearnerContext, improper_learn, prepare_context
from .mechanisms import (
    ChoosingInstance,
    PrivacyParams,
    choosing_mechanism,
    exponential_mechanism,
    laplace_sample,
    private_median,
)

AuditScenario = tuple[
    Callable[[Dataset, np.random.Generator], Hashable],
    Dataset,
    Dataset,
    PrivacyParams,
]


def randomized_response_scenario(epsilon: float = 1.0) -> AuditScenario:
    """Flip a single stored bit with probability 1 / (1 + e^eps)."""
    keep = math.exp(epsilon) / (1.0 + math.exp(epsilon))

    def mech(data: Dataset, rng: np.random.Generator) -> int:
        bit = int(data.labels[0])
        return bit if rng.random() < keep else 1 - bit

    d0 = Dataset.from_pairs([(0, 0)])
    d1 = Dataset.from_pairs([(0, 1)])
    return mech, d0, d1, PrivacyParams(epsilon, 0.0)


def laplace_scenario(epsilon: float = 1.0) -> AuditScenario:
    """Noisy count of 1-labels; sensitivity 1, scale 1/eps."""

    def mech(data: Dataset, rng: np.random.Generator) -> float:
        return float(data.labels.sum()) + laplace_sample(1.0 / epsilon, rng)

    base = [(i, i % 2) for i in range(10)]
    other = list(base)
    other[0] = (0, 1)
    return (
        mech,
        Dataset.from_pairs(base),
        Dataset.from_pairs(other),
        PrivacyParams(epsilon, 0.0),
    )


def exponential_mechanism_scenario(epsilon: float = 1.0) -> AuditScenario:
    """Select among four values scored by their multiplicity in the data."""

    def mech(data: Dataset, rng: np.random.Generator) -> int:
        cands = [
            (v, float((data.points == v).sum())) for v in range(4)
        ]
        return int(exponential_mechanism(cands, 1.0, epsilon, rng))

    base = [(i % 4, 0) for i in range(8)]
    other = list(base)
    other[0] = (1, 0)
    return (
        mech,
        Dataset.from_pairs(base),
        Dataset.from_pairs(other),
        PrivacyParams(epsilon, 0.0),
    )


def choosing_scenario(
    epsilon: float = 1.0, delta: float = 1e-6, beta: float = 0.1
) -> AuditScenario:
    """Bounded-quality selection with multiplicity scores (1-bounded)."""

    def mech(data: Dataset, rng: np.random.Generator) -> int | None:
        scores = {
            v: int((data.points == v).sum()) for v in range(4)
        }
        inst = ChoosingInstance(scores=scores, k=1, n=len(data))
        out = choosing_mechanism(inst, PrivacyParams(epsilon, delta), beta, rng)
        return None if out is None else int(out)

    base = [(0, 0)] * 30 + [(1, 0)] * 3
    other = list(base)
    other[-1] = (2, 0)
    return (
        mech,
        Dataset.from_pairs(base),
        Dataset.from_pairs(other),
        PrivacyParams(epsilon, delta),
    )


def median_scenario(epsilon: float = 1.0) -> AuditScenario:
    """Private median of twenty small integers; the default backend is pure DP."""

    def mech(data: Dataset, rng: np.random.Generator) -> int:
        return private_median(
            [int(p) for p in data.points],
            domain_max=8,
            alpha=1.0 / 3.0,
            privacy=PrivacyParams(epsilon, 0.0),
            beta=0.1,
            rng=rng,
        )

    base = [(3, 0)] * 10 + [(5, 0)] * 10
    other = list(base)
    other[0] = (8, 0)
    return (
        mech,
        Dataset.from_pairs(base),
        Dataset.from_pairs(other),
        PrivacyParams(epsilon, 0.0),
    )


def improper_learner_scenario(
    epsilon: float = 1.0,
    delta: float = 1e-5,
    alpha: float = 0.2,
    beta: float = 0.1,
    n: int = 30,
    cls: ConceptClass | None = None,
    context: LearnerContext | None = None,
) -> AuditScenario:
    """The whole improper pipeline on a tiny instance; claimed (2 eps, 2 delta).

    The two datasets are realizable labelings differing in one example.
    Outcomes are the output hypothesis 1-sets, a finite space.
    """
    cls = cls if cls is not None else example_class()
    ctx = context if context is not None else prepare_context(cls)
    params = LearnParams(
        alpha=alpha, beta=beta, privacy=PrivacyParams(epsilon, delta)
    )

    def mech(data: Dataset, rng: np.random.Generator) -> frozenset[int]:
        trace = improper_learn(cls, data, params, rng, context=ctx)
        return trace.hypothesis.ones

    target = cls.concepts[-2]
    pairs = [(i % cls.domain_size, target(i % cls.domain_size)) for i in range(n)]
    other = list(pairs)
    swap = (pairs[0][0] + 1) % cls.domain_size
    other[0] = (swap, target(swap))  # both sides stay realizable by the target
    return (
        mech,
        Dataset.from_pairs(pairs),
        Dataset.from_pairs(other),
        PrivacyParams(2.0 * epsilon, 2.0 * delta),
    )
