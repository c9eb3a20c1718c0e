"""
Shared fixtures: slope sets, seeded randomness and sample points
"""
import random
from fractions import Fraction

import pytest

from models.intervals import IntervalUnion
from models.relation import SlopeSet
from models.shift_space import Sided, Tail, TruncatedPoint


@pytest.fixture
def three_lines():
    return SlopeSet.of([3, 1, "1/2"])


@pytest.fixture
def two_lines():
    return SlopeSet.of(["1/2", 3])


@pytest.fixture
def four_lines():
    return SlopeSet.of(["1/2", 3, "1/3", 2])


@pytest.fixture
def rng():
    return random.Random(20240611)


def random_trajectory(omega, rng, length, denominator=64):
    """Random exact trajectory y_0..y_(length-1) staying inside [0,1]"""
    while True:
        ys = [Fraction(rng.randint(1, denominator), denominator)]
        for _ in range(length - 1):
            options = [w * ys[-1] for w in omega.slopes if w * ys[-1] <= 1]
            ys.append(rng.choice(options))
        if all(y > 0 for y in ys):
            return ys


def random_two_sided_point(omega, rng, radius, denominator=48):
    """Random two-sided window x_-radius..x_radius with an unknown tail"""
    coords = [Fraction(rng.randint(1, denominator), denominator)]
    for _ in range(2 * radius):
        options = [w * coords[-1] for w in omega.slopes if w * coords[-1] <= 1]
        coords.append(rng.choice(options))
    return TruncatedPoint.make(omega, coords, start=-radius, sided=Sided.TWO, tail=Tail.unknown())


def random_one_sided_point(omega, rng, length, denominator=48):
    return TruncatedPoint.make(omega, random_trajectory(omega, rng, length, denominator))


def random_union(rng, pieces, denominator=60):
    """Random normalized union of up to `pieces` closed intervals in [0,1]"""
    pairs = []
    for _ in range(pieces):
        lo, hi = sorted(rng.randint(1, denominator) for _ in range(2))
        pairs.append((Fraction(lo, denominator), Fraction(hi, denominator)))
    return IntervalUnion.of(pairs)
