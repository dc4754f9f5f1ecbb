import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vc1learn import (
    Concept,
    ConceptClass,
    Dataset,
    canonicalize,
    comparable,
    example_class,
    f_represent,
    is_canonical,
    leq,
    relabel_dataset,
)

X1, X2, X3, X4, X5, X6, X7 = range(7)


def test_canonicalize_drops_duplicate_concepts():
    cls = ConceptClass.from_ones(3, [{0}, {0}, {1, 2}])
    canon, _ = canonicalize(cls)
    assert len(canon.concepts) == 2
    assert canon.concepts[0].ones == frozenset({0})


def test_canonicalize_merges_identical_columns():
    # columns of points 1 and 2 are identical, lowest index survives
    cls = ConceptClass.from_ones(4, [{0}, {1, 2}, {3}])
    canon, merge = canonicalize(cls)
    assert canon.domain_size == 3
    assert list(merge) == [0, 1, 1, 2]
    assert canon.concepts[1].ones == frozenset({1})


def test_canonicalize_example_class_unchanged():
    cls = example_class()
    canon, merge = canonicalize(cls)
    assert canon.domain_size == 7
    assert [c.ones for c in canon.concepts] == [c.ones for c in cls.concepts]
    assert list(merge) == list(range(7))


def test_canonicalize_flags_constant_points():
    # point 2 is always 0, point 3 always 1
    cls = ConceptClass.from_ones(4, [{0, 3}, {1, 3}, {0, 1, 3}])
    canon, merge = canonicalize(cls)
    assert canon.constant_labels == {int(merge[2]): 0, int(merge[3]): 1}
    assert set(canon.order_points) == {int(merge[0]), int(merge[1])}


def test_canonicalize_empty_class_errors():
    with pytest.raises(ValueError, match="empty concept class"):
        ConceptClass(domain_size=2, concepts=())


def test_canonicalize_idempotent(corpus):
    for cls in corpus[:40]:
        canon, _ = canonicalize(cls)
        again, merge = canonicalize(canon)
        assert is_canonical(canon)
        assert [c.ones for c in again.concepts] == [c.ones for c in canon.concepts]
        assert list(merge) == list(range(canon.domain_size))


def test_f_represent_identity_for_all_zeros():
    cls = example_class()
    f = cls.concepts[7]  # the empty concept
    assert f.ones == frozenset()
    out = f_represent(cls, f)
    assert [c.ones for c in out.concepts] == [c.ones for c in cls.concepts]


def test_f_represent_pointwise_xor():
    cls = example_class()
    f = cls.concepts[0]  # {x1}
    out = f_represent(cls, f)
    # independent check: XOR every concept with f by hand
    for before, after in zip(cls.concepts, out.concepts):
        expected = {x for x in range(7) if (x in before.ones) != (x in f.ones)}
        assert after.ones == frozenset(expected)
    assert out.concepts[0].ones == frozenset()
    assert out.concepts[4].ones == frozenset({X5})


def test_f_represent_contains_all_zeros_concept(corpus):
    for cls in corpus[:30]:
        for f in cls.concepts[:3]:
            out = f_represent(cls, f)
            assert frozenset() in {c.ones for c in out.concepts}


def test_f_represent_involution():
    cls = example_class()
    for f in cls.concepts:
        assert f_represent(f_represent(cls, f), f) == cls


def test_f_represent_requires_membership():
    cls = example_class()
    with pytest.raises(ValueError, match="must belong"):
        f_represent(cls, Concept(frozenset({0, 1})))


def test_relabel_dataset_zero_f_is_identity():
    data = Dataset.from_pairs([(0, 1), (3, 0)])
    assert relabel_dataset(data, Concept(frozenset())) == data


def test_relabel_dataset_xor_and_involution():
    f = Concept(frozenset({X1}))
    data = Dataset.from_pairs([(X1, 1), (X5, 1), (X2, 0)])
    out = relabel_dataset(data, f)
    assert out.pairs() == [(X1, 0), (X5, 1), (X2, 0)]
    assert relabel_dataset(out, f) == data


@settings(max_examples=50, deadline=None)
@given(
    pairs=st.lists(
        st.tuples(st.integers(0, 9), st.integers(0, 1)), min_size=0, max_size=20
    ),
    f_ones=st.sets(st.integers(0, 9)),
)
def test_relabel_involution_property(pairs, f_ones):
    data = Dataset.from_pairs(pairs)
    f = Concept(frozenset(f_ones))
    assert relabel_dataset(relabel_dataset(data, f), f) == data


def test_leq_example_values(example_cls):
    # every concept containing x5 also contains x1, but not conversely
    assert leq(example_cls, X5, X1)
    assert not leq(example_cls, X1, X5)
    # siblings on different branches
    assert not leq(example_cls, X4, X5)
    assert not leq(example_cls, X5, X4)
    assert not comparable(example_cls, X4, X5)
    assert comparable(example_cls, X1, X7)
    for x in range(7):
        assert leq(example_cls, x, x)
        assert comparable(example_cls, x, x)


def test_leq_rejects_constant_points():
    cls, _ = canonicalize(ConceptClass.from_ones(3, [{0, 2}, {1, 2}, {0, 1, 2}]))
    const = next(iter(cls.constant_labels))
    live = cls.order_points[0]
    with pytest.raises(ValueError, match="order universe"):
        leq(cls, const, live)


def _order_matrix(cls):
    pts = cls.order_points
    return {
        (a, b): leq(cls, a, b) for a in pts for b in pts
    }


@pytest.mark.parametrize("which", ["example", "corpus"])
def test_leq_is_a_partial_order(which, example_cls, corpus):
    classes = [example_cls] if which == "example" else []
    if which == "corpus":
        classes = [canonicalize(c)[0] for c in corpus if c.domain_size <= 16][:25]
    for cls in classes:
        rel = _order_matrix(cls)
        pts = cls.order_points
        for a in pts:
            assert rel[(a, a)]
            for b in pts:
                if rel[(a, b)] and rel[(b, a)]:
                    assert a == b  # antisymmetry
                for c in pts:
                    if rel[(a, b)] and rel[(b, c)]:
                        assert rel[(a, c)]  # transitivity


def test_incomparable_points_share_no_concept(corpus):
    # in any member representation, two incomparable points are never both 1
    for cls in corpus[:40]:
        base, _ = canonicalize(cls)
        rep, _ = canonicalize(f_represent(base, base.concepts[0]))
        pts = rep.order_points
        if len(pts) > 24:
            continue
        m = rep.matrix
        for i, a in enumerate(pts):
            for b in pts[i + 1 :]:
                if not comparable(rep, a, b):
                    assert not np.any(m[:, a] & m[:, b])


def test_upsets_are_chains(corpus):
    # the fact that makes the tree construction well defined
    for cls in corpus[:40]:
        base, _ = canonicalize(cls)
        rep, _ = canonicalize(f_represent(base, base.concepts[0]))
        pts = rep.order_points
        if len(pts) > 24:
            continue
        for x in pts:
            ups = [y for y in pts if y != x and leq(rep, x, y)]
            for i, a in enumerate(ups):
                for b in ups[i + 1 :]:
                    assert comparable(rep, a, b)


@settings(max_examples=60, deadline=None)
@given(
    ones_sets=st.lists(
        st.frozensets(st.integers(0, 5)), min_size=1, max_size=10
    )
)
def test_canonicalize_random_classes_property(ones_sets):
    cls = ConceptClass.from_ones(6, ones_sets)
    canon, merge = canonicalize(cls)
    assert is_canonical(canon)
    assert len(merge) == 6
    # merging preserves every concept's value at every original point
    for orig, c_new in zip(
        [c for i, c in enumerate(cls.concepts) if c.ones not in
         {d.ones for d in cls.concepts[:i]}],
        canon.concepts,
    ):
        for p in range(6):
            assert (p in orig.ones) == (int(merge[p]) in c_new.ones)


def test_dataset_validation():
    with pytest.raises(ValueError):
        Dataset(np.array([0, 1]), np.array([0, 2]))
    with pytest.raises(ValueError):
        Dataset(np.array([-1]), np.array([0]))
    data = Dataset.from_pairs([(0, 1)])
    with pytest.raises(ValueError):
        data.points[0] = 3  # arrays are frozen
