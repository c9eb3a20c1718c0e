"""
Line relations F_Ω on the unit square: slope sets, exact images and slope-product combinatorics
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import gcd
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from .errors import DomainError, EmptySetError, IntervalCapExceeded, SlopeSetError
from .intervals import ONE, ZERO, IntervalUnion
from .rational import never_connect, parse_rational, rational_from_json, rational_to_json
from .semigroup import frobenius_number, minimal_generators

logger = logging.getLogger(__name__)

DEFAULT_INTERVAL_CAP = 4096

TRACE_FAMILY_PREFIX = (Fraction(3), Fraction(1), Fraction(1, 2))


@dataclass(frozen=True)
class SlopeSet:
    """
    Ordered slopes ω_1..ω_M of the relation F_Ω = ⋃ {y = ω_j x}

    Letters of slope words are 1-based positions in ``slopes``. ``nc_pair`` is
    an optional designated (below-one, above-one) letter pair.
    """
    slopes: Tuple[Fraction, ...]
    nc_pair: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if not self.slopes:
            raise SlopeSetError("Slope set is empty")
        if any(w <= 0 for w in self.slopes):
            raise SlopeSetError(f"Slopes must be positive: {[str(w) for w in self.slopes]}")
        if len(set(self.slopes)) != len(self.slopes):
            raise SlopeSetError(f"Duplicate slopes in {[str(w) for w in self.slopes]}")
        if self.nc_pair is not None:
            i, j = self.nc_pair
            if not (1 <= i <= self.M and 1 <= j <= self.M):
                raise SlopeSetError(f"Designated pair {self.nc_pair} is out of range for M={self.M}")

    @classmethod
    def of(cls, values: Iterable, nc_pair: Optional[Tuple[int, int]] = None) -> SlopeSet:
        return cls(tuple(parse_rational(v) for v in values), nc_pair)

    @classmethod
    def parse(cls, text: str) -> SlopeSet:
        """Parse a comma separated list such as "3,1,1/2" """
        parts = [p for p in text.split(",") if p.strip()]
        if not parts:
            raise SlopeSetError("Slope set is empty")
        return cls.of(parts)

    @property
    def M(self) -> int:
        return len(self.slopes)

    def slope(self, letter: int) -> Fraction:
        if not 1 <= letter <= self.M:
            raise SlopeSetError(f"Letter {letter} is not in 1..{self.M}")
        return self.slopes[letter - 1]

    def letter(self, value) -> int:
        value = Fraction(value)
        try:
            return self.slopes.index(value) + 1
        except ValueError:
            raise SlopeSetError(f"Slope {value} is not in {self}") from None

    def has_slope(self, value) -> bool:
        return Fraction(value) in self.slopes

    @property
    def has_identity(self) -> bool:
        return ONE in self.slopes

    @property
    def max_slope(self) -> Fraction:
        return max(self.slopes)

    def contracting(self) -> Optional[Fraction]:
        """Smallest slope below 1, used to continue a point toward the top"""
        below = [w for w in self.slopes if w < 1]
        return min(below) if below else None

    def expanding(self) -> Optional[Fraction]:
        """Largest slope above 1"""
        above = [w for w in self.slopes if w > 1]
        return max(above) if above else None

    def reciprocal(self) -> SlopeSet:
        """Slope set of the inverse relation"""
        return SlopeSet(tuple(1 / w for w in self.slopes))

    def is_reciprocal_closed(self) -> bool:
        return set(self.slopes) == set(1 / w for w in self.slopes)

    def subset(self, values: Iterable) -> SlopeSet:
        chosen = [parse_rational(v) for v in values]
        for value in chosen:
            self.letter(value)
        return SlopeSet(tuple(chosen))

    def to_json(self) -> Dict:
        return {
            "slopes": [rational_to_json(w) for w in self.slopes],
            "nc_pair": list(self.nc_pair) if self.nc_pair else None,
        }

    @classmethod
    def from_json(cls, data: Dict) -> SlopeSet:
        pair = data.get("nc_pair")
        return cls(tuple(rational_from_json(w) for w in data["slopes"]), tuple(pair) if pair else None)

    def __str__(self) -> str:
        return "{" + ", ".join(str(w) for w in self.slopes) + "}"


class Profile(str, Enum):
    LF_INDUCING = "lf_inducing"
    TRACE_FAMILY = "trace_family"


@dataclass
class ValidationReport:
    profile: Profile
    passed: bool
    failures: List[str] = field(default_factory=list)
    nc_pair: Optional[Tuple[int, int]] = None

    def to_json(self) -> Dict:
        return {
            "profile": self.profile.value,
            "passed": self.passed,
            "failures": list(self.failures),
            "nc_pair": list(self.nc_pair) if self.nc_pair else None,
        }


def _straddles(omega: SlopeSet, i: int, j: int) -> bool:
    return omega.slope(i) < 1 < omega.slope(j)


def validate_slope_set(omega: SlopeSet, profile: Profile = Profile.LF_INDUCING) -> ValidationReport:
    """
    Check a slope set against a named profile

    lf_inducing needs a pair ω_i < 1 < ω_j that never connects; trace_family
    needs 3, 1, 1/2 as the first three slopes and every slope in [1/3, 3].
    """
    profile = Profile(profile)
    failures: List[str] = []
    pair = None

    if profile is Profile.LF_INDUCING:
        if omega.M < 2:
            failures.append("size: at least two slopes are required")
        if omega.nc_pair is not None:
            candidates = [omega.nc_pair]
        else:
            candidates = [
                (i, j)
                for i in range(1, omega.M + 1)
                for j in range(1, omega.M + 1)
                if _straddles(omega, i, j)
            ]
        ordered = [(i, j) for i, j in candidates if _straddles(omega, i, j)]
        if not ordered:
            failures.append("ordering: no pair with ω_i < 1 < ω_j")
        else:
            pair = next((p for p in ordered if never_connect(omega.slope(p[0]), omega.slope(p[1]))), None)
            if pair is None:
                failures.append("never-connect: every straddling pair is multiplicatively dependent")
    else:
        if omega.slopes[:3] != TRACE_FAMILY_PREFIX:
            failures.append("prefix: the first three slopes must be 3, 1, 1/2")
        out_of_range = [w for w in omega.slopes if not Fraction(1, 3) <= w <= 3]
        if out_of_range:
            failures.append(f"range: slopes outside [1/3, 3]: {[str(w) for w in out_of_range]}")

    report = ValidationReport(profile=profile, passed=not failures, failures=failures, nc_pair=pair)
    logger.debug(f"validate_slope_set({omega}, {profile.value}) -> {report.failures or 'pass'}")
    return report


def require_trace_family(omega: SlopeSet) -> None:
    report = validate_slope_set(omega, Profile.TRACE_FAMILY)
    if not report.passed:
        raise SlopeSetError(f"{omega} is not in the tracing family: {'; '.join(report.failures)}")


def point_image(omega: SlopeSet, x) -> List[Fraction]:
    """Sorted, deduplicated {ω_j·x : ω_j·x ≤ 1}"""
    x = Fraction(x)
    if not 0 <= x <= 1:
        raise DomainError(f"Point {x} is outside [0,1]")
    return sorted({w * x for w in omega.slopes if w * x <= 1})


def point_preimage(omega: SlopeSet, y) -> List[Fraction]:
    y = Fraction(y)
    if not 0 <= y <= 1:
        raise DomainError(f"Point {y} is outside [0,1]")
    return sorted({y / w for w in omega.slopes if y / w <= 1})


def in_relation(omega: SlopeSet, x: Fraction, y: Fraction) -> bool:
    return any(w * x == y for w in omega.slopes)


def interval_image(
    omega: SlopeSet,
    A: IntervalUnion,
    direction: str = "forward",
    cap: int = DEFAULT_INTERVAL_CAP,
) -> IntervalUnion:
    """
    Image of A under F_Ω (forward) or F_Ω^{-1} (inverse), clipped to [0,1]

    Args:
        omega: slope set
        A: interval union inside [0,1]
        direction: "forward" or "inverse"
        cap: maximal number of intervals in the result

    Returns:
        Normalized image
    """
    if direction == "forward":
        factors = omega.slopes
    elif direction == "inverse":
        factors = tuple(1 / w for w in omega.slopes)
    else:
        raise DomainError(f"Unknown direction {direction!r}")

    result = IntervalUnion.empty()
    for factor in factors:
        result = result.union(A.scaled(factor))
    if len(result) > cap:
        raise IntervalCapExceeded(
            f"Image has {len(result)} intervals, above cap {cap}; raise the cap or reduce n",
            cap,
        )
    return result


def iterate_image(
    omega: SlopeSet,
    A: IntervalUnion,
    n: int,
    cap: int = DEFAULT_INTERVAL_CAP,
    direction: str = "forward",
) -> IntervalUnion:
    if n < 0:
        raise DomainError(f"Iteration count must be nonnegative, got {n}")
    current = A
    for step in range(n):
        current = interval_image(omega, current, direction, cap)
        logger.debug(f"iterate_image step {step + 1}/{n}: {len(current)} intervals")
        if current.is_empty:
            break
    return current


def reachable_layers(
    omega: SlopeSet,
    A: IntervalUnion,
    n: int,
    floor: Fraction,
    cap: int = DEFAULT_INTERVAL_CAP,
) -> List[IntervalUnion]:
    """
    Image layers J_0..J_n restricted to points that can still reach [floor, 1]

    A point below floor/ω_max^(n-i) at step i cannot climb to floor in the
    remaining n-i steps, so J_n ∩ [floor, 1] equals F^n(A) ∩ [floor, 1].
    """
    if n < 0:
        raise DomainError(f"Iteration count must be nonnegative, got {n}")
    growth = max(omega.max_slope, ONE)
    layers = [A.intersect_interval(min(floor / growth ** n, ONE), ONE)]
    for i in range(1, n + 1):
        threshold = min(floor / growth ** (n - i), ONE)
        layers.append(interval_image(omega, layers[-1], "forward", cap).intersect_interval(threshold, ONE))
    return layers


@lru_cache(maxsize=512)
def _products(slopes: Tuple[Fraction, ...], M: int) -> FrozenSet[Fraction]:
    current = {ONE}
    for _ in range(M):
        current = {value * w for value in current for w in slopes}
    return frozenset(current)


def slope_products(omega: SlopeSet, M: int) -> FrozenSet[Fraction]:
    """The set 𝒜(M) of M-fold products of slopes (set semantics)"""
    if M < 1:
        raise DomainError(f"M must be positive, got {M}")
    return _products(omega.slopes, M)


def brute_force_products(omega: SlopeSet, M: int) -> FrozenSet[Fraction]:
    """𝒜(M) by enumerating all |Ω|^M words; an independent check for small M"""
    return frozenset(reduce(lambda a, b: a * b, word, ONE) for word in product(omega.slopes, repeat=M))


def alpha_max(omega: SlopeSet, M: int) -> Optional[Fraction]:
    below = [value for value in slope_products(omega, M) if value < 1]
    return max(below) if below else None


def diagonal_in_power(omega: SlopeSet, n: int) -> bool:
    return ONE in slope_products(omega, n)


def eventual_diagonal_threshold(omega: SlopeSet, horizon: int) -> Optional[int]:
    """
    Smallest K with the diagonal inside F^n for every n ≥ K, when certifiable

    The hit set {n ≤ horizon : 1 ∈ 𝒜(n)} is closed under addition; its minimal
    generators must have gcd 1, and K is one past their Frobenius number.
    """
    if horizon < 1:
        raise DomainError(f"Horizon must be positive, got {horizon}")
    hits = [n for n in range(1, horizon + 1) if diagonal_in_power(omega, n)]
    if not hits:
        logger.info(f"No diagonal power of {omega} up to {horizon}")
        return None
    generators = minimal_generators(hits)
    divisor = reduce(gcd, generators)
    if divisor != 1:
        logger.info(f"Diagonal powers of {omega} share divisor {divisor}; no threshold")
        return None
    threshold = max(1, frobenius_number(generators) + 1)
    if threshold > horizon or any(n not in hits for n in range(threshold, horizon + 1)):
        return None
    return threshold


def hausdorff_to_unit(A: IntervalUnion) -> Fraction:
    """
    Exact d_H(A, [0,1]) for non-empty A ⊆ [0,1]

    Farthest points sit at the boundary of [0,1] for edge gaps and at the
    midpoint of interior gaps.
    """
    if A.is_empty:
        raise EmptySetError("Hausdorff distance to [0,1] is undefined for the empty set")
    worst = ZERO
    for lo, hi in A.complement_gaps():
        if lo == 0 or hi == 1:
            distance = hi - lo
        else:
            distance = (hi - lo) / 2
        worst = max(worst, distance)
    return worst
