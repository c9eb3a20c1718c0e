from fractions import Fraction as F

import pytest

from models.errors import BranchCapExceeded, DomainError, PseudoOrbitError
from models.intervals import IntervalUnion
from models.relation import SlopeSet, iterate_image, slope_products
from models.shift_space import Tail, TruncatedPoint, shift, shift_n, validate_point
from services.shadowing import (
    NoShadowCertificate,
    PseudoOrbit,
    brute_force_shadow,
    constraint_width,
    diagonal_pseudo_orbit,
    diagonal_shadow_threshold,
    growing_images_series,
    separation_radius,
    series_verdict,
    shadow_feasible,
    staircase_pseudo_orbit,
    two_line_gap,
    verify_pseudo_orbit,
)


@pytest.fixture
def staircase():
    return staircase_pseudo_orbit(4)


def test_staircase_levels(staircase):
    assert staircase.delta == F(1, 8)
    assert len(staircase) == 6
    assert [p.value_at(1) for p in staircase.points] == [F(1, 2), F(5, 8), F(3, 4), F(7, 8), 1, 1]
    assert verify_pseudo_orbit(staircase)


def test_staircase_needs_identity(two_lines):
    with pytest.raises(PseudoOrbitError):
        staircase_pseudo_orbit(4, omega=two_lines)


def test_verify_rejects_large_jumps(three_lines):
    po = staircase_pseudo_orbit(2, delta=F(1, 8), omega=three_lines)
    # levels 1/2, 3/4, 1 sit at distance 1/8 from each other
    assert not verify_pseudo_orbit(po)


def test_constraint_width():
    assert constraint_width(F(1, 16)) == 4
    assert constraint_width(F(1, 64)) == 6
    assert constraint_width(F(1, 100)) == 6
    assert constraint_width(F(1)) == 0


def test_staircase_cannot_be_shadowed(three_lines, staircase):
    result = shadow_feasible(three_lines, staircase, F(1, 16), horizon=3, depth=6)
    assert result.status == "UNSAT"
    cert = result.certificate
    assert (cert.horizon, cert.depth) == (3, 6)
    assert cert.branches >= 1
    assert sum(cert.pruned.values()) >= 1
    assert len(cert.constraints) == 3 * 4


@pytest.mark.parametrize("horizon", [3, 4, 5, 6])
def test_unsat_persists_with_longer_horizons(three_lines, staircase, horizon):
    result = shadow_feasible(three_lines, staircase, F(1, 16), horizon=horizon, depth=horizon + 3)
    assert not result.feasible


def test_short_horizon_is_shadowable(three_lines, staircase):
    result = shadow_feasible(three_lines, staircase, F(1, 16), horizon=2, depth=5)
    assert result.status == "SAT"
    witness = result.witness
    assert validate_point(three_lines, witness.point)
    assert witness.window.contains(witness.point.value_at(1))


def test_coarse_tolerance_is_always_shadowable(three_lines, staircase):
    assert shadow_feasible(three_lines, staircase, F(1), horizon=6, depth=5).feasible


def test_brute_force_agrees(three_lines, staircase):
    assert brute_force_shadow(three_lines, staircase, F(1, 16), horizon=6, depth=9) == (False, 3 ** 8)
    feasible, _ = brute_force_shadow(three_lines, staircase, F(1, 16), horizon=2, depth=5)
    assert feasible
    assert not shadow_feasible(three_lines, staircase, F(1, 16), horizon=6, depth=9).feasible


def test_search_rejects_bad_parameters(three_lines, staircase):
    with pytest.raises(DomainError):
        shadow_feasible(three_lines, staircase, F(1, 16), horizon=3, depth=5)
    with pytest.raises(DomainError):
        shadow_feasible(three_lines, staircase, F(1, 16), horizon=7, depth=20)
    with pytest.raises(DomainError):
        shadow_feasible(three_lines, staircase, F(0), horizon=3, depth=6)


def test_branch_cap_is_inconclusive(three_lines, staircase):
    with pytest.raises(BranchCapExceeded) as info:
        shadow_feasible(three_lines, staircase, F(1, 16), horizon=6, depth=9, branch_cap=3)
    assert info.value.cap == 3


def test_true_orbit_is_shadowed_by_itself(two_lines):
    x = TruncatedPoint.make(two_lines, [F(1, 3), 1, F(1, 2)], tail=Tail.zero())
    po = PseudoOrbit((x, shift(x), shift_n(x, 2)), F(1, 100))
    result = shadow_feasible(two_lines, po, F(1, 100), horizon=3, depth=8)
    assert result.feasible
    assert result.witness.word.letters == (2, 1, 1, 1, 1, 1, 1)
    assert result.witness.point.coords == (
        F(1, 3), 1, F(1, 2), F(1, 4), F(1, 8), F(1, 16), F(1, 32), F(1, 64)
    )


def test_diagonal_pseudo_orbit(four_lines):
    po = diagonal_pseudo_orbit(four_lines, ["1/2", 2], F(1, 2), F(1, 8))
    assert len(po) == 14
    levels = [p.value_at(1) for p in po.points[0:12:2]]
    assert levels == [F(1, 2), F(3, 5), F(7, 10), F(4, 5), F(9, 10), 1]
    assert po.points[1].coords[0] == F(1, 4)
    assert verify_pseudo_orbit(po)


def test_diagonal_word_checks(four_lines):
    with pytest.raises(PseudoOrbitError):
        diagonal_pseudo_orbit(four_lines, [2, "1/2"], F(1, 2), F(1, 8))
    with pytest.raises(PseudoOrbitError):
        diagonal_pseudo_orbit(four_lines, ["1/2", 3], F(1, 2), F(1, 8))
    with pytest.raises(DomainError):
        diagonal_pseudo_orbit(four_lines, ["1/2", 2], F(1), F(1, 8))


def test_separation_radius(four_lines):
    assert separation_radius(four_lines, 2, F(1, 2)) == F(1, 14)
    assert diagonal_shadow_threshold(four_lines, 2, F(1, 2)) == F(1, 56)


def test_separation_radius_needs_other_products(three_lines):
    assert separation_radius(three_lines, 1, F(1, 2)) == F(1, 10)
    with pytest.raises(DomainError):
        separation_radius(SlopeSet.of([1]), 2, F(1, 2))


@pytest.mark.parametrize("slopes,M", [("1/2,3,1/3,2", 2), ("3,1,1/2", 1), ("1,3/2", 1)])
def test_separation_radius_forces_the_identity_branch(slopes, M):
    omega = SlopeSet.parse(slopes)
    a = F(1, 2)
    rho = separation_radius(omega, M, a)
    others = [alpha for alpha in slope_products(omega, M) if alpha != 1]
    for j in range(1, 100):
        x = a - rho + 2 * rho * j / 100
        assert all(abs(alpha * x - a) >= rho for alpha in others)


def test_half_the_gap_is_too_wide_above_one():
    omega = SlopeSet.parse("1,3/2")
    a = F(1, 2)
    half_gap = F(1, 2) * a / 2
    x, y = F(2, 5), F(3, 5)
    assert y == F(3, 2) * x
    assert abs(x - a) < half_gap and abs(y - a) < half_gap
    assert separation_radius(omega, 1, a) == F(1, 10) <= abs(x - a)


@pytest.mark.slow
def test_diagonal_cannot_be_shadowed(four_lines):
    po = diagonal_pseudo_orbit(four_lines, ["1/2", 2], F(1, 2), F(1, 8))
    result = shadow_feasible(four_lines, po, F(1, 64), horizon=11, depth=16)
    assert result.status == "UNSAT"
    assert result.certificate.depth == 16


def test_certificate_json_round_trip(three_lines, staircase):
    cert = shadow_feasible(three_lines, staircase, F(1, 16), horizon=3, depth=6).certificate
    data = cert.to_json()
    assert data["kind"] == "no_shadow"
    assert all(isinstance(key, str) for key in data["pruned"])
    assert NoShadowCertificate.from_json(data) == cert
    with pytest.raises(DomainError):
        NoShadowCertificate.from_json({**data, "kind": "trace"})


@pytest.mark.parametrize("values,window,expected", [
    ([F(1, 2)] * 11, 10, "mixing-obstructed"),
    ([F(1, 2)] * 3, 2, "mixing-obstructed"),
    ([F(1, 2), F(1, 3), F(1, 4)], 2, "consistent-with-mixing"),
    ([F(1, 2), F(1, 3), F(1, 3)], 2, "inconclusive"),
    ([F(1, 3), F(1, 2), F(1, 3)], 2, "mixing-obstructed"),
    ([F(1, 2), F(1, 3)] * 6, 10, "mixing-obstructed"),
    ([F(1, 2), F(1, 3)], 2, "inconclusive"),
    ([F(1, 2)] * 3 + [F(0)], 2, "consistent-with-mixing"),
])
def test_series_verdict(values, window, expected):
    assert series_verdict(values, window) == expected


def test_series_with_a_zero_rebound_is_inconclusive():
    assert series_verdict([F(0), F(1, 2), F(1, 4)], 2) == "inconclusive"


@pytest.mark.parametrize("slopes", [[1], [1, 2]])
def test_stalled_series_is_obstructed(slopes):
    series = growing_images_series(SlopeSet.of(slopes), IntervalUnion.interval(F(1, 2), F(3, 4)), 20)
    assert {d for _, d in series.values} == {F(1, 2)}
    assert series.verdict == "mixing-obstructed"


def test_two_line_series_starts_at_one_half(two_lines):
    series = growing_images_series(two_lines, IntervalUnion.interval(F(5, 6), 1), 3, window=2)
    assert series.values[0] == (1, F(1, 2))
    assert [n for n, _ in series.values] == [1, 2, 3]
    assert series.to_json()["series"][0]["d"] == {"num": "1", "den": "2"}


def test_series_rejects_degenerate_start(two_lines):
    with pytest.raises(DomainError):
        growing_images_series(two_lines, IntervalUnion.interval(F(1, 2), F(1, 2)), 3)
    with pytest.raises(DomainError):
        growing_images_series(two_lines, IntervalUnion.interval(F(1, 2), 1), 0)


def test_two_line_gap():
    lower, upper = two_line_gap(2)
    assert lower == 0 and upper > 0
    lower, upper = two_line_gap(3)
    assert upper == 5 * lower


@pytest.mark.parametrize("M", range(1, 15))
def test_two_line_gap_is_a_gap_of_the_image(two_lines, M):
    image = iterate_image(two_lines, IntervalUnion.interval(F(5, 6), 1), M)
    assert two_line_gap(M) in image.complement_gaps()
