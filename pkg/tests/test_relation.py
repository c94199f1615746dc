import numpy as np
import pytest
from hypothesis import given

from relforge import PointClass, Relation, random_relation
from relforge.errors import RelationError
from relforge.relation import all_masks, enumerate_relations, functional_masks

from conftest import relations

# the sixteen one-variable relations over {0, 1}, in the reference listing order
REFERENCE_R1 = [
    set(),
    {(0, 0)}, {(0, 1)}, {(1, 0)}, {(1, 1)},
    {(0, 0), (0, 1)}, {(0, 0), (1, 0)}, {(0, 0), (1, 1)},
    {(0, 1), (1, 0)}, {(0, 1), (1, 1)}, {(1, 0), (1, 1)},
    {(0, 0), (0, 1), (1, 0)}, {(0, 0), (0, 1), (1, 1)},
    {(0, 0), (1, 0), (1, 1)}, {(0, 1), (1, 0), (1, 1)},
    {(0, 0), (0, 1), (1, 0), (1, 1)},
]


def test_enumeration_matches_reference_list():
    rels = list(enumerate_relations(1, 2))
    assert [set(r.tuples()) for r in rels] == REFERENCE_R1


def test_enumeration_count_general():
    assert sum(1 for _ in enumerate_relations(1, 3)) == 2 ** 9
    assert all_masks(2, 2).shape == (2 ** 8, 2, 2)
    assert len({m.tobytes() for m in all_masks(1, 3)}) == 512
    assert functional_masks(1, 3).shape == (27, 3)


def test_classify_eval_and_image():
    r = Relation.from_cells([[(), 1, (1, 2)], [0, (0, 1, 2), ()], [2, 2, 2]], 3, arity=2)
    assert r.classify((0, 0)) is PointClass.UNDEFINED
    assert r.classify((0, 1)) is PointClass.SINGLE
    assert r.classify((0, 2)) is PointClass.MANY
    assert r((1, 1)) == r.eval((1, 1)) == {0, 1, 2}
    assert r.image({0}, {0, 1, 2}) == {1, 2}
    assert r.image({2}, {1}) == {2}
    assert r.class_counts() == {PointClass.UNDEFINED: 2, PointClass.SINGLE: 5, PointClass.MANY: 2}


def test_from_tuples_and_tuples_round_trip():
    ts = [(0, 1, 2), (0, 1, 0), (2, 2, 1)]
    r = Relation.from_tuples(ts, 2, 3)
    assert sorted(r.tuples()) == sorted(ts)
    assert r.eval((0, 1)) == {0, 2}


def test_constructors():
    assert Relation.zero(2, 3).eval((1, 2)) == {0}
    assert Relation.empty(1, 3).classify(0) is PointClass.UNDEFINED
    assert Relation.universal(1, 2).eval(1) == {0, 1}
    assert Relation.identity(3).tuples() == [(0, 0), (1, 1), (2, 2)]
    assert Relation.from_function((2, 0, 1)).eval(0) == {2}


def test_immutable_and_hashable():
    r = Relation.identity(3)
    with pytest.raises(ValueError):
        r.masks[0] = 0
    assert {r, Relation.identity(3)} == {r}


@pytest.mark.parametrize("bad", [((3,), 3), ([[1, 1], [1, 1]], 3), ([8, 1, 1], 3)])
def test_bad_construction(bad):
    with pytest.raises(RelationError):
        Relation(*bad)


def test_out_of_range_point():
    with pytest.raises(RelationError):
        Relation.identity(3).eval(3)
    with pytest.raises(RelationError):
        Relation.zero(2, 3).eval((0,))


def test_random_relation_reproducible():
    a = random_relation(2, 3, np.random.default_rng(5))
    b = random_relation(2, 3, np.random.default_rng(5))
    assert a == b
    f = random_relation(3, 4, np.random.default_rng(1), functional=True)
    assert f.is_functional() and f.arity == 3


@given(relations(arity=2, order=3))
def test_partition_of_points(r):
    counts = r.class_counts()
    assert sum(counts.values()) == 9
    for p in r.points():
        k = len(r.eval(p))
        assert r.classify(p) is {0: PointClass.UNDEFINED, 1: PointClass.SINGLE}.get(k, PointClass.MANY)
