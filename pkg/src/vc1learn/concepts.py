"""Finite boolean concept classes, canonicalization, and label transforms.

A concept class is a finite set of 0/1-valued functions (concepts) over a
finite domain ``{0, ..., domain_size - 1}``. Everything downstream (the
partial order, the class tree, the learners) operates on a *canonical*
class, in which

* no two concepts are equal as functions,
* no two domain points have identical value under every concept
  (indistinguishable points are merged, lowest index surviving), and
* points on which every concept agrees are retained but flagged as
  *constant*; they carry a forced label and sit outside the partial-order
  universe.

All values here are immutable after construction and safe to share across
threads; operations are pure functions of their inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np


class NotRealizableError(ValueError):
    """A labeled dataset is inconsistent with every concept in the class."""


@dataclass(frozen=True)
class Concept:
    """A single 0/1-valued function, stored as its set of 1-points."""

    ones: frozenset[int]
    id: str | None = None

    def __call__(self, point: int) -> int:
        return 1 if point in self.ones else 0


@dataclass(frozen=True, eq=False)
class Dataset:
    """A sequence of labeled examples (point index, 0/1 label).

    Backed by read-only numpy arrays so that million-example datasets stay
    cheap. ``realizable_by`` is test metadata only: the id of a concept
    known to label the data, never consumed by algorithms.
    """

    points: np.ndarray
    labels: np.ndarray
    realizable_by: str | None = None

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.int64)
        labs = np.asarray(self.labels, dtype=np.uint8)
        if pts.shape != labs.shape or pts.ndim != 1:
            raise ValueError("points and labels must be 1-d arrays of equal length")
        if len(labs) and not np.all((labs == 0) | (labs == 1)):
            raise ValueError("labels must be 0 or 1")
        if len(pts) and pts.min() < 0:
            raise ValueError("negative point index")
        pts.flags.writeable = False
        labs.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labs)

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[int, int]], realizable_by: str | None = None
    ) -> "Dataset":
        pairs = list(pairs)
        pts = np.array([p for p, _ in pairs], dtype=np.int64)
        labs = np.array([l for _, l in pairs], dtype=np.uint8)
        return cls(pts, labs, realizable_by)

    def pairs(self) -> list[tuple[int, int]]:
        return [(int(p), int(l)) for p, l in zip(self.points, self.labels)]

    def __len__(self) -> int:
        return len(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dataset):
            return NotImplemented
        return np.array_equal(self.points, other.points) and np.array_equal(
            self.labels, other.labels
        )

    def __hash__(self) -> int:
        return hash((self.points.tobytes(), self.labels.tobytes()))


@dataclass(frozen=True)
class Hypothesis:
    """A learned 0/1 labeling of the domain.

    ``proper_index`` is set when the hypothesis coincides with a class
    member, in which case ``ones`` equals that concept's ones.
    """

    ones: frozenset[int]
    proper_index: int | None = None

    def __call__(self, point: int) -> int:
        return 1 if point in self.ones else 0


@dataclass(frozen=True)
class ConceptClass:
    """An ordered collection of concepts over a fixed finite domain.

    ``merge_map`` maps the domain of the class this one was canonicalized
    from onto the current domain; it is the identity for directly
    constructed classes.
    """

    domain_size: int
    concepts: tuple[Concept, ...]
    merge_map: tuple[int, ...] = field(default=())
    name: str | None = None

    def __post_init__(self) -> None:
        if self.domain_size < 0:
            raise ValueError("domain_size must be nonnegative")
        if not self.concepts:
            raise ValueError("empty concept class")
        for c in self.concepts:
            if c.ones and (min(c.ones) < 0 or max(c.ones) >= self.domain_size):
                raise ValueError(f"concept {c.id!r} has points outside the domain")
        if not self.merge_map:
            object.__setattr__(self, "merge_map", tuple(range(self.domain_size)))

    @classmethod
    def from_ones(
        cls,
        domain_size: int,
        ones_sets: Sequence[Iterable[int]],
        ids: Sequence[str] | None = None,
        name: str | None = None,
    ) -> "ConceptClass":
        concepts = tuple(
            Concept(frozenset(o), ids[i] if ids else f"c{i}")
            for i, o in enumerate(ones_sets)
        )
        return cls(domain_size, concepts, name=name)

    @cached_property
    def matrix(self) -> np.ndarray:
        """Boolean matrix, one row per concept, one column per point."""
        m = np.zeros((len(self.concepts), self.domain_size), dtype=bool)
        for i, c in enumerate(self.concepts):
            if c.ones:
                m[i, list(c.ones)] = True
        m.flags.writeable = False
        return m

    @cached_property
    def constant_labels(self) -> dict[int, int]:
        """Points every concept agrees on, mapped to their forced label."""
        m = self.matrix
        out: dict[int, int] = {}
        if len(self.concepts) == 0 or self.domain_size == 0:
            return out
        all_one = m.all(axis=0)
        all_zero = (~m).all(axis=0)
        for p in np.nonzero(all_one)[0]:
            out[int(p)] = 1
        for p in np.nonzero(all_zero)[0]:
            out[int(p)] = 0
        return out

    @cached_property
    def order_points(self) -> tuple[int, ...]:
        """Non-constant points: the universe of the partial order."""
        const = self.constant_labels
        return tuple(p for p in range(self.domain_size) if p not in const)

    @cached_property
    def concept_index(self) -> dict[frozenset[int], int]:
        """First index of each distinct ones-set."""
        out: dict[frozenset[int], int] = {}
        for i, c in enumerate(self.concepts):
            out.setdefault(c.ones, i)
        return out

    def __len__(self) -> int:
        return len(self.concepts)


def is_canonical(cls: ConceptClass) -> bool:
    """True when concepts are pairwise distinct and so are point columns."""
    ones_seen = {c.ones for c in cls.concepts}
    if len(ones_seen) != len(cls.concepts):
        return False
    m = cls.matrix
    cols = {m[:, j].tobytes() for j in range(cls.domain_size)}
    return len(cols) == cls.domain_size


def canonicalize(cls: ConceptClass) -> tuple[ConceptClass, np.ndarray]:
    """Reduce a class to canonical form.

    Drops duplicate concepts (first occurrence kept), merges points with
    identical columns (lowest index becomes the representative), and
    compacts the domain. Constant points are kept; they are flagged via
    ``ConceptClass.constant_labels`` on the result rather than removed, so
    error accounting still covers the full domain.

    Returns
    -------
    (canonical_class, merge_map)
        ``merge_map[p]`` is the new index of original point ``p``. The same
        map is stored on the returned class.
    """
    if not cls.concepts:
        raise ValueError("empty concept class")

    kept_concepts: list[Concept] = []
    seen: set[frozenset[int]] = set()
    for c in cls.concepts:
        if c.ones not in seen:
            seen.add(c.ones)
            kept_concepts.append(c)

    m = np.zeros((len(kept_concepts), cls.domain_size), dtype=bool)
    for i, c in enumerate(kept_concepts):
        if c.ones:
            m[i, list(c.ones)] = True

    rep_of: dict[bytes, int] = {}
    merge = np.empty(cls.domain_size, dtype=np.int64)
    reps: list[int] = []
    for p in range(cls.domain_size):
        key = m[:, p].tobytes()
        if key not in rep_of:
            rep_of[key] = len(reps)
            reps.append(p)
        merge[p] = rep_of[key]

    new_concepts = tuple(
        Concept(frozenset(int(merge[q]) for q in c.ones), c.id) for c in kept_concepts
    )
    canon = ConceptClass(
        domain_size=len(reps),
        concepts=new_concepts,
        merge_map=tuple(int(v) for v in merge),
        name=cls.name,
    )
    merge.flags.writeable = False
    return canon, merge


def f_represent(cls: ConceptClass, f: Concept) -> ConceptClass:
    """Relabel every concept by XOR with a member concept ``f``.

    The result contains the all-zeros concept (the image of ``f`` itself).
    Applying the transform twice with the same ``f`` restores the original
    class. The result is *not* automatically canonical: two distinct
    columns can collapse onto each other when ``f`` splits them, so callers
    that need the partial order should re-canonicalize.
    """
    if f.ones not in {c.ones for c in cls.concepts}:
        raise ValueError("representative must belong to class")
    new_concepts = tuple(
        Concept(frozenset(c.ones ^ f.ones), c.id) for c in cls.concepts
    )
    return ConceptClass(
        domain_size=cls.domain_size,
        concepts=new_concepts,
        merge_map=cls.merge_map,
        name=cls.name,
    )


def relabel_dataset(dataset: Dataset, f: Concept) -> Dataset:
    """XOR every label with ``f``'s value at the example's point. Involutive."""
    if len(dataset) == 0:
        return dataset
    size = int(dataset.points.max()) + 1
    if f.ones:
        size = max(size, max(f.ones) + 1)
    f_row = np.zeros(size, dtype=np.uint8)
    if f.ones:
        f_row[list(f.ones)] = 1
    new_labels = dataset.labels ^ f_row[dataset.points]
    return Dataset(dataset.points.copy(), new_labels, dataset.realizable_by)


def _check_order_point(cls: ConceptClass, p: int) -> None:
    if p < 0 or p >= cls.domain_size:
        raise ValueError(f"point {p} outside domain")
    if p in cls.constant_labels:
        raise ValueError("point outside order universe")


def leq(class_f: ConceptClass, a: int, b: int) -> bool:
    """Partial order: ``a <= b`` iff every concept with a 1 at ``a`` has a 1 at ``b``.

    Defined on the non-constant points of a canonical class; on such a
    class the relation is reflexive, antisymmetric, and transitive.
    """
    _check_order_point(class_f, a)
    _check_order_point(class_f, b)
    m = class_f.matrix
    return bool(np.all(m[:, b] | ~m[:, a]))


def comparable(class_f: ConceptClass, a: int, b: int) -> bool:
    """True when ``a`` and ``b`` are ordered one way or the other."""
    return leq(class_f, a, b) or leq(class_f, b, a)
