"""Concept-class generators and dataset sampling.

Three families cover the interesting regimes: threshold functions (a
single deep chain), point functions (a flat star), and random
root-path-closure classes over random trees, whose properness pattern is
tunable. Two hand-built seven-point fixtures exercise the worked
examples used throughout the tests. Every generated class has VC
dimension 1 by construction and is returned in canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .concepts import Concept, ConceptClass, Dataset, canonicalize
from .oracles import Distribution
from .rng import make_rng


@dataclass(frozen=True)
class GeneratorSpec:
    """Recipe for one generated class."""

    kind: str  # thresholds | points | random_tree | example | modified_example
    n: int | None = None
    max_children: int = 3
    concept_rate: float = 0.5
    seed: int = 0


def thresholds_class(n: int) -> ConceptClass:
    """Threshold functions x >= t over [0, n), including both boundary concepts."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ones_sets = [range(t, n) for t in range(n + 1)]
    ids = [f"ge{t}" for t in range(n + 1)]
    return ConceptClass.from_ones(n, ones_sets, ids, name=f"thresholds({n})")


def point_functions_class(n: int) -> ConceptClass:
    """Indicator functions of single points plus the empty concept."""
    if n < 1:
        raise ValueError("n must be at least 1")
    ones_sets: list[set[int]] = [set()] + [{x} for x in range(n)]
    ids = ["empty"] + [f"pt{x}" for x in range(n)]
    return ConceptClass.from_ones(n, ones_sets, ids, name=f"points({n})")


def random_tree_class(
    n: int, max_children: int = 3, concept_rate: float = 0.5, seed: int = 0
) -> ConceptClass:
    """Root-path closures of a random rooted tree over ``n`` points.

    Every leaf path and the empty concept are always included, keeping
    every tree leaf realized; interior paths enter with probability
    ``concept_rate`` (1 gives the maximum class). The result is
    canonicalized, so indistinguishable points may merge and the domain
    may end up smaller than ``n``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if max_children < 1:
        raise ValueError("max_children must be at least 1")
    if not 0.0 <= concept_rate <= 1.0:
        raise ValueError("concept_rate must be in [0, 1]")
    rng = make_rng(seed)
    order = rng.permutation(n)
    parent: dict[int, int | None] = {}
    child_count: dict[int | None, int] = {None: 0}
    attached: list[int | None] = [None]
    for x in order:
        x = int(x)
        slots = [v for v in attached if child_count[v] < max_children]
        p = slots[int(rng.integers(len(slots)))]
        parent[x] = p
        child_count[p] += 1
        child_count[x] = 0
        attached.append(x)

    def path(x: int) -> frozenset[int]:
        out = set()
        q: int | None = x
        while q is not None:
            out.add(q)
            q = parent[q]
        return frozenset(out)

    leaves = [x for x in range(n) if child_count[x] == 0]
    ones_sets: list[frozenset[int]] = [frozenset()]
    ids = ["empty"]
    for x in range(n):
        if x in set(leaves):
            keep = True
        else:
            keep = bool(rng.random() < concept_rate)
        if keep:
            ones_sets.append(path(x))
            ids.append(f"path{x}")
    raw = ConceptClass.from_ones(
        n, ones_sets, ids, name=f"random_tree({n},{max_children},{concept_rate},{seed})"
    )
    canon, _ = canonicalize(raw)
    # a fresh class, not a view of the raw one: reset the provenance map
    return ConceptClass(
        canon.domain_size, canon.concepts, name=canon.name
    )


def example_class() -> ConceptClass:
    """Seven points, eight concepts: the worked four-layer tree fixture."""
    ones_sets = [
        {0},
        {1},
        {2},
        {0, 3},
        {0, 4},
        {0, 4, 5},
        {0, 4, 6},
        set(),
    ]
    ids = ["h1", "h2", "h3", "h4", "h5", "h6", "h7", "h8"]
    return ConceptClass.from_ones(7, ones_sets, ids, name="example")


def modified_example_class() -> ConceptClass:
    """The example fixture with the {x1, x5} concept removed.

    Dropping it makes one interior tree node unrealized, which is the
    smallest instance where the proper learner's subtree descent matters.
    """
    ones_sets = [
        {0},
        {1},
        {2},
        {0, 3},
        {0, 4, 5},
        {0, 4, 6},
        set(),
    ]
    ids = ["h1", "h2", "h3", "h4", "h6", "h7", "h8"]
    return ConceptClass.from_ones(7, ones_sets, ids, name="modified_example")


def generate_class(spec: GeneratorSpec) -> ConceptClass:
    """Materialize a generator recipe."""
    if spec.kind == "thresholds":
        if spec.n is None:
            raise ValueError("thresholds generator needs n")
        return thresholds_class(spec.n)
    if spec.kind == "points":
        if spec.n is None:
            raise ValueError("points generator needs n")
        return point_functions_class(spec.n)
    if spec.kind == "random_tree":
        if spec.n is None:
            raise ValueError("random_tree generator needs n")
        return random_tree_class(
            spec.n, spec.max_children, spec.concept_rate, spec.seed
        )
    if spec.kind == "example":
        return example_class()
    if spec.kind == "modified_example":
        return modified_example_class()
    raise ValueError(f"unknown generator kind {spec.kind!r}")


def sample_dataset(
    cls: ConceptClass,
    concept: Concept,
    dist: Distribution,
    n: int,
    rng: np.random.Generator,
) -> Dataset:
    """Draw ``n`` i.i.d. points from ``dist`` labeled by a member concept."""
    if concept.ones not in cls.concept_index:
        raise ValueError("labeling concept must belong to class")
    if len(dist) != cls.domain_size:
        raise ValueError("distribution support must match the domain")
    points = rng.choice(cls.domain_size, size=n, p=dist.weights)
    row = np.zeros(cls.domain_size, dtype=np.uint8)
    if concept.ones:
        row[list(concept.ones)] = 1
    return Dataset(points.astype(np.int64), row[points], realizable_by=concept.id)
