from fractions import Fraction as F

import pytest

from models.errors import (
    ArcCapExceeded,
    DomainError,
    IndexOutOfRange,
    MetricError,
    ReciprocalClosureError,
    ShiftError,
    UncertifiableError,
    UndecidableBound,
)
from models.shift_space import (
    MetricBound,
    Sided,
    SlopeWord,
    Tail,
    TruncatedPoint,
    arc_range,
    constant_point,
    endpoint_approx,
    enumerate_arcs,
    infer_word,
    is_endpoint,
    metric_D,
    periodic_approximant,
    point_from_word,
    shift,
    shift_n,
    validate_point,
)
from tests.conftest import random_one_sided_point, random_trajectory, random_two_sided_point


@pytest.fixture
def orbit(two_lines):
    return TruncatedPoint.make(two_lines, [F(1, 3), 1, F(1, 2)], tail=Tail.zero())


def test_values_along_tails(orbit, two_lines, three_lines):
    assert orbit.value_at(4) == F(1, 4)
    assert orbit.value_at(6) == F(1, 16)
    with pytest.raises(IndexOutOfRange):
        orbit.value_at(0)
    unknown = TruncatedPoint.make(two_lines, [F(1, 3), 1])
    assert unknown.value_at(3) is None
    with pytest.raises(IndexOutOfRange):
        unknown.require(3)
    c = constant_point(three_lines, F(3, 4))
    assert c.value_at(10) == F(3, 4)
    loop = TruncatedPoint.make(two_lines, [F(1, 6), F(1, 2)], start=0, sided=Sided.TWO, tail=Tail.periodic(2))
    assert loop.value_at(-1) == F(1, 2)
    assert loop.value_at(2) == F(1, 6)


def test_validate_point(orbit, two_lines, three_lines):
    assert validate_point(two_lines, orbit)
    bad = TruncatedPoint.make(two_lines, [F(1, 3), F(1, 2)])
    check = validate_point(two_lines, bad)
    assert not check and check.index == 1
    assert not validate_point(two_lines, constant_point(two_lines, F(1, 2)))
    assert validate_point(three_lines, constant_point(three_lines, F(1, 2)))
    assert validate_point(two_lines, constant_point(two_lines, 0))
    outside = TruncatedPoint.make(two_lines, [F(1, 2), F(3, 2)])
    assert validate_point(two_lines, outside).index == 2


def test_word_helpers(orbit, two_lines):
    assert infer_word(two_lines, orbit.coords) == (2, 1)
    assert orbit.word == (2, 1)
    built = point_from_word(two_lines, SlopeWord((2, 1)), F(1, 3), Tail.zero())
    assert built == orbit
    assert SlopeWord.from_slopes(two_lines, [3, "1/2"]).letters == (2, 1)
    with pytest.raises(DomainError):
        point_from_word(two_lines, (2, 2), F(1, 2))


def test_shift(orbit, two_lines):
    assert shift(orbit).coords == (1, F(1, 2), F(1, 4))
    assert shift_n(orbit, 3).coords == (F(1, 4), F(1, 8), F(1, 16))
    truncated = TruncatedPoint.make(two_lines, [F(1, 3), 1])
    once = shift(truncated)
    assert once.coords == (F(1),)
    with pytest.raises(ShiftError):
        shift(once)
    two_sided = TruncatedPoint.make(two_lines, [F(1, 3), 1], start=0, sided=Sided.TWO)
    assert shift(two_sided).start == -1
    assert shift(two_sided).value_at(0) == 1


def test_metric_on_constants(three_lines):
    bound = metric_D(constant_point(three_lines, F(1, 2)), constant_point(three_lines, F(3, 4)))
    assert bound == MetricBound(F(1, 8), F(1, 8))
    assert bound.exact
    assert metric_D(constant_point(three_lines, 1), constant_point(three_lines, 1)).upper == 0


def test_metric_with_unknown_tails(two_lines, orbit):
    window = TruncatedPoint.make(two_lines, [F(1, 3), 1, F(1, 2)])
    bound = metric_D(orbit, window)
    assert bound.lower == 0
    assert bound.upper == F(1, 16)
    assert bound.below(F(1, 8))
    with pytest.raises(UndecidableBound):
        bound.below(F(1, 32))


def test_metric_rejects_mixed_points(two_lines, three_lines, orbit):
    with pytest.raises(MetricError):
        metric_D(orbit, TruncatedPoint.make(two_lines, [F(1, 3)], start=0, sided=Sided.TWO))
    with pytest.raises(MetricError):
        metric_D(orbit, constant_point(three_lines, 0))


def test_arcs(two_lines, three_lines):
    assert arc_range(two_lines, (2, 1)) == [F(1, 3), F(1), F(1, 2)]
    assert len(enumerate_arcs(two_lines, 1)) == 2
    arcs = enumerate_arcs(three_lines, 3)
    assert len(arcs) == 27
    assert arcs[0][0].letters == (1, 1, 1)
    assert arcs[0][1] == [F(1, 27), F(1, 9), F(1, 3), F(1)]
    with pytest.raises(ArcCapExceeded):
        enumerate_arcs(three_lines, 3, cap=20)
    with pytest.raises(DomainError):
        arc_range(two_lines, ())


def test_endpoint_of_an_arc_maximal_point(orbit, two_lines):
    assert is_endpoint(orbit)
    e = endpoint_approx(two_lines, orbit, F(1, 8))
    assert e.coords == orbit.coords
    assert is_endpoint(e)


def test_endpoint_extends_the_word(two_lines):
    p = TruncatedPoint.make(two_lines, [F(1, 4), F(3, 4), F(3, 8)])
    e = endpoint_approx(two_lines, p, F(1, 8))
    assert is_endpoint(e)
    assert validate_point(two_lines, e)
    assert metric_D(p, e).upper < F(1, 8)
    assert len(e.coords) > 3


def test_endpoint_needs_enough_coordinates(two_lines):
    with pytest.raises(UncertifiableError):
        endpoint_approx(two_lines, TruncatedPoint.make(two_lines, [F(1, 4), F(1, 8)]), F(1, 8))


def test_endpoint_near_the_top(two_lines):
    top = TruncatedPoint.make(two_lines, [0])
    e = endpoint_approx(two_lines, top, F(1, 8))
    assert is_endpoint(e)
    assert metric_D(top, e).upper < F(1, 8)


def test_endpoint_density_sample(two_lines, rng):
    for _ in range(15):
        p = random_one_sided_point(two_lines, rng, 4)
        e = endpoint_approx(two_lines, p, F(1, 8))
        assert is_endpoint(e) and validate_point(two_lines, e)
        assert metric_D(p, e).upper < F(1, 8)


def test_periodic_approximant(four_lines, rng):
    for eps in (F(1, 4), F(1, 16)):
        for _ in range(10):
            p = random_two_sided_point(four_lines, rng, 5)
            z, period = periodic_approximant(four_lines, p, eps)
            assert validate_point(four_lines, z)
            assert z.tail.period == period
            assert all(z.value_at(i) == z.value_at(i + period) for i in range(-10, 10))
            assert metric_D(z, p).upper < eps


def test_periodic_approximant_preconditions(two_lines, four_lines):
    p = TruncatedPoint.make(two_lines, [F(1, 6), F(1, 2), F(1, 4)], start=-1, sided=Sided.TWO)
    with pytest.raises(ReciprocalClosureError):
        periodic_approximant(two_lines, p, F(1, 4))
    short = TruncatedPoint.make(four_lines, [F(1, 6), F(1, 2)], start=0, sided=Sided.TWO)
    with pytest.raises(ShiftError):
        periodic_approximant(four_lines, short, F(1, 16))


def test_json_round_trip(orbit, two_lines):
    data = orbit.to_json()
    assert data["tail"] == "zero"
    assert data["word"] == [2, 1]
    assert TruncatedPoint.from_json(two_lines, data) == orbit
    assert Tail.from_json({"periodic": 3}) == Tail.periodic(3)


@pytest.mark.parametrize("tail", [Tail.unknown(), Tail.zero()])
def test_shift_at_most_doubles_the_metric(two_lines, rng, tail):
    for _ in range(40):
        x = TruncatedPoint.make(two_lines, random_trajectory(two_lines, rng, 5), tail=tail)
        y = TruncatedPoint.make(two_lines, random_trajectory(two_lines, rng, 5), tail=tail)
        assert metric_D(shift(x), shift(y)).upper <= 2 * metric_D(x, y).upper


@pytest.mark.parametrize("depth", [1, 2, 4])
def test_arc_range_is_the_largest_admissible_start(three_lines, depth):
    step = F(1, 2 ** 20)
    for word, maxima in enumerate_arcs(three_lines, depth):
        slopes = word.slopes(three_lines)

        def orbit(x1):
            values = [x1]
            for w in slopes:
                values.append(values[-1] * w)
            return values

        top = maxima[0]
        for j in range(9):
            assert all(0 <= v <= 1 for v in orbit(top * j / 8))
        assert orbit(top) == maxima
        assert max(orbit(top + step)) > 1
