from fractions import Fraction as F

import pytest

from models.errors import DomainError
from models.intervals import IntervalUnion
from tests.conftest import random_union


def test_of_merges_touching_and_overlapping():
    A = IntervalUnion.of([(F(1, 2), F(3, 4)), (0, F(1, 4)), (F(1, 4), F(1, 3)), (F(2, 3), 1)])
    assert A.intervals == ((F(0), F(1, 3)), (F(1, 2), F(1)))


def test_bounds_are_checked():
    with pytest.raises(DomainError):
        IntervalUnion.interval(F(1, 2), F(1, 3))
    with pytest.raises(DomainError):
        IntervalUnion.interval(F(1, 2), F(3, 2))


def test_scaled_clips_to_unit_interval():
    A = IntervalUnion.of([(F(1, 6), F(1, 4)), (F(1, 2), 1)])
    assert A.scaled(F(3)).intervals == ((F(1, 2), F(3, 4)),)
    assert A.scaled(F(1, 2)).intervals == ((F(1, 12), F(1, 8)), (F(1, 4), F(1, 2)))


def test_containment():
    A = IntervalUnion.of([(0, F(1, 3)), (F(1, 2), 1)])
    assert A.contains_point(F(1, 3))
    assert not A.contains_point(F(2, 5))
    assert A.contains_interval(F(1, 2), F(2, 3))
    assert not A.contains_interval(F(1, 4), F(2, 3))
    assert A.contains(IntervalUnion.of([(F(1, 10), F(1, 5)), (F(3, 4), 1)]))


def test_complement_gaps_and_measure():
    A = IntervalUnion.of([(F(1, 4), F(1, 2)), (F(3, 4), F(7, 8))])
    assert A.complement_gaps() == [(F(0), F(1, 4)), (F(1, 2), F(3, 4)), (F(7, 8), F(1))]
    assert A.measure() == F(3, 8)
    assert IntervalUnion.empty().complement_gaps() == [(F(0), F(1))]
    assert IntervalUnion.unit().complement_gaps() == []


def test_intersection_keeps_degenerate_pieces():
    A = IntervalUnion.of([(0, F(1, 2))])
    assert A.intersect_interval(F(1, 2), 1).intervals == ((F(1, 2), F(1, 2)),)
    assert not A.intersect_interval(F(1, 2), 1).has_interior


def test_json_round_trip():
    A = IntervalUnion.of([(F(1, 3), F(2, 5))])
    assert IntervalUnion.from_json(A.to_json()) == A
    assert str(A) == "[1/3, 2/5]"
    assert str(IntervalUnion.empty()) == "∅"


def test_normalization_is_idempotent(rng):
    for _ in range(50):
        A = random_union(rng, rng.randint(1, 6))
        assert A.normalized() == A
        assert IntervalUnion.of(A.intervals + A.intervals) == A
        for (_, hi), (lo, _) in zip(A.intervals, A.intervals[1:]):
            assert hi < lo
