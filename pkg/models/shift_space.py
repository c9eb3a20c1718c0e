"""
Truncated points of Mahavier products, the metric D, shift maps, arcs and endpoint/periodic constructions
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product
from math import lcm
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .errors import (
    ArcCapExceeded,
    DomainError,
    IndexOutOfRange,
    MetricError,
    ReciprocalClosureError,
    ShiftError,
    SlopeSetError,
    UncertifiableError,
    UndecidableBound,
)
from .intervals import ONE, ZERO
from .rational import rational_from_json, rational_to_json
from .relation import Profile, SlopeSet, in_relation, validate_slope_set

logger = logging.getLogger(__name__)

DEFAULT_SCAN_LIMIT = 512
DEFAULT_ARC_CAP = 65536
DEFAULT_ENDPOINT_STEPS = 100_000


class Sided(str, Enum):
    ONE = "one_sided"
    TWO = "two_sided"


class TailKind(str, Enum):
    UNKNOWN = "unknown"
    ZERO = "zero"
    CONST = "const"
    PERIODIC = "periodic"


@dataclass(frozen=True)
class Tail:
    """How a point continues outside its explicit window"""
    kind: TailKind = TailKind.UNKNOWN
    value: Optional[Fraction] = None
    period: Optional[int] = None

    @classmethod
    def unknown(cls) -> Tail:
        return cls(TailKind.UNKNOWN)

    @classmethod
    def zero(cls) -> Tail:
        return cls(TailKind.ZERO)

    @classmethod
    def const(cls, c) -> Tail:
        return cls(TailKind.CONST, value=Fraction(c))

    @classmethod
    def periodic(cls, period: int) -> Tail:
        if period < 1:
            raise DomainError(f"Period must be positive, got {period}")
        return cls(TailKind.PERIODIC, period=period)

    @property
    def resolved(self) -> bool:
        return self.kind is not TailKind.UNKNOWN

    def to_json(self) -> Union[str, Dict]:
        if self.kind is TailKind.CONST:
            return {"const": rational_to_json(self.value)}
        if self.kind is TailKind.PERIODIC:
            return {"periodic": self.period}
        return self.kind.value

    @classmethod
    def from_json(cls, data) -> Tail:
        if data == "unknown":
            return cls.unknown()
        if data == "zero":
            return cls.zero()
        if isinstance(data, dict) and "const" in data:
            return cls.const(rational_from_json(data["const"]))
        if isinstance(data, dict) and "periodic" in data:
            return cls.periodic(int(data["periodic"]))
        raise DomainError(f"Unknown tail policy {data!r}")


@dataclass(frozen=True)
class SlopeWord:
    """Slope letters in 1..M; one-sided words index from 1"""
    letters: Tuple[int, ...]
    sided: Sided = Sided.ONE

    @classmethod
    def from_slopes(cls, omega: SlopeSet, values: Sequence, sided: Sided = Sided.ONE) -> SlopeWord:
        return cls(tuple(omega.letter(v) for v in values), sided)

    def slopes(self, omega: SlopeSet) -> List[Fraction]:
        return [omega.slope(letter) for letter in self.letters]

    def __len__(self) -> int:
        return len(self.letters)


def infer_word(omega: SlopeSet, coords: Sequence[Fraction]) -> Tuple[Optional[int], ...]:
    """First matching letter for each adjacent pair, None where no slope links the pair"""
    letters = []
    for x, y in zip(coords, coords[1:]):
        letters.append(next((k + 1 for k, w in enumerate(omega.slopes) if w * x == y), None))
    return tuple(letters)


@dataclass(frozen=True)
class TruncatedPoint:
    """
    A finite window of a point of X_F^+ (one-sided) or X_F (two-sided)

    ``start`` is the index of ``coords[0]``; it is 1 for one-sided points.
    The tail describes coordinates outside the window.
    """
    omega: SlopeSet
    coords: Tuple[Fraction, ...]
    start: int = 1
    sided: Sided = Sided.ONE
    tail: Tail = field(default_factory=Tail.unknown)

    @classmethod
    def make(cls, omega: SlopeSet, coords: Sequence, start: int = 1, sided: Sided = Sided.ONE,
             tail: Optional[Tail] = None) -> TruncatedPoint:
        return cls(omega, tuple(Fraction(c) for c in coords), start, Sided(sided), tail or Tail.unknown())

    @property
    def end(self) -> int:
        return self.start + len(self.coords) - 1

    @property
    def word(self) -> Tuple[Optional[int], ...]:
        return infer_word(self.omega, self.coords)

    def _right(self, i: int) -> Optional[Fraction]:
        steps = i - self.end
        last = self.coords[-1]
        kind = self.tail.kind
        if kind is TailKind.CONST:
            return self.tail.value
        if kind is TailKind.PERIODIC:
            return self.coords[(i - self.start) % self.tail.period]
        if kind is TailKind.ZERO:
            r = self.omega.contracting()
            if r is not None:
                return last * r ** steps
        return ZERO if last == 0 else None

    def _left(self, i: int) -> Optional[Fraction]:
        steps = self.start - i
        first = self.coords[0]
        kind = self.tail.kind
        if kind is TailKind.CONST:
            return self.tail.value
        if kind is TailKind.PERIODIC:
            return self.coords[(i - self.start) % self.tail.period]
        if kind is TailKind.ZERO:
            rho = self.omega.expanding()
            if rho is not None:
                return first / rho ** steps
        return ZERO if first == 0 else None

    def value_at(self, i: int) -> Optional[Fraction]:
        """Coordinate at index i, None when the tail leaves it undetermined"""
        if self.sided is Sided.ONE and i < 1:
            raise IndexOutOfRange(f"One-sided points have no index {i}")
        if self.start <= i <= self.end:
            return self.coords[i - self.start]
        if i > self.end:
            return self._right(i)
        return self._left(i)

    def require(self, i: int) -> Fraction:
        value = self.value_at(i)
        if value is None:
            raise IndexOutOfRange(f"Index {i} is outside the window [{self.start}, {self.end}] of an unknown tail")
        return value

    def to_json(self) -> Dict:
        return {
            "start": self.start,
            "coords": [rational_to_json(c) for c in self.coords],
            "tail": self.tail.to_json(),
            "word": list(self.word),
            "sided": self.sided.value,
        }

    @classmethod
    def from_json(cls, omega: SlopeSet, data: Dict) -> TruncatedPoint:
        sided = Sided(data.get("sided", Sided.ONE.value))
        return cls.make(
            omega,
            [rational_from_json(c) for c in data["coords"]],
            start=int(data.get("start", 1)),
            sided=sided,
            tail=Tail.from_json(data.get("tail", "unknown")),
        )


def constant_point(omega: SlopeSet, c, length: int = 1, sided: Sided = Sided.ONE, start: int = 1) -> TruncatedPoint:
    """The constant sequence c̄ (needs slope 1 unless c = 0)"""
    return TruncatedPoint.make(omega, [c] * length, start=start, sided=sided, tail=Tail.const(c))


def point_from_word(omega: SlopeSet, word: Union[SlopeWord, Sequence[int]], x1, tail: Optional[Tail] = None) -> TruncatedPoint:
    letters = word.letters if isinstance(word, SlopeWord) else tuple(word)
    coords = [Fraction(x1)]
    for letter in letters:
        coords.append(coords[-1] * omega.slope(letter))
    if any(not 0 <= c <= 1 for c in coords):
        raise DomainError(f"Starting value {x1} leaves [0,1] along word {letters}")
    return TruncatedPoint.make(omega, coords, tail=tail)


@dataclass(frozen=True)
class PointCheck:
    valid: bool
    index: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid


def validate_point(omega: SlopeSet, p: TruncatedPoint) -> PointCheck:
    """
    Check Mahavier-product membership of the window and admissibility of the tail

    The failing index is the index of the first coordinate of the failing pair.
    """
    if not p.coords:
        raise DomainError("A truncated point needs at least one coordinate")
    if p.sided is Sided.ONE and p.start != 1:
        return PointCheck(False, p.start, "one-sided points start at index 1")
    for offset, x in enumerate(p.coords):
        if not 0 <= x <= 1:
            return PointCheck(False, p.start + offset, f"coordinate {x} outside [0,1]")
    for offset, (x, y) in enumerate(zip(p.coords, p.coords[1:])):
        if not in_relation(omega, x, y):
            return PointCheck(False, p.start + offset, f"({x}, {y}) lies on no slope line")
    return _check_tail(omega, p)


def _check_tail(omega: SlopeSet, p: TruncatedPoint) -> PointCheck:
    tail = p.tail
    first, last = p.coords[0], p.coords[-1]
    two_sided = p.sided is Sided.TWO

    if tail.kind is TailKind.CONST:
        c = tail.value
        if not 0 <= c <= 1:
            return PointCheck(False, p.end, f"constant tail {c} outside [0,1]")
        if c != 0 and not omega.has_identity:
            return PointCheck(False, p.end, f"constant tail {c} needs slope 1")
        if not in_relation(omega, last, c):
            return PointCheck(False, p.end, f"({last}, {c}) does not enter the constant tail")
        if two_sided and not in_relation(omega, c, first):
            return PointCheck(False, p.start - 1, f"({c}, {first}) does not leave the constant tail")
    elif tail.kind is TailKind.ZERO:
        if omega.contracting() is None and last != 0:
            return PointCheck(False, p.end, "zero tail needs a slope below 1")
        if two_sided and omega.expanding() is None and first != 0:
            return PointCheck(False, p.start - 1, "two-sided zero tail needs a slope above 1")
    elif tail.kind is TailKind.PERIODIC:
        P = tail.period
        if len(p.coords) < P:
            return PointCheck(False, p.end, f"window shorter than period {P}")
        for offset in range(len(p.coords) - P):
            if p.coords[offset] != p.coords[offset + P]:
                return PointCheck(False, p.start + offset, f"window is not {P}-periodic")
        if not in_relation(omega, last, p.value_at(p.end + 1)):
            return PointCheck(False, p.end, "periodic wrap pair lies on no slope line")
    return PointCheck(True)


def shift(p: TruncatedPoint) -> TruncatedPoint:
    """
    One-sided shift drops x_1; two-sided shift moves the origin one step right

    Args:
        p: point to shift

    Returns:
        The shifted point over the same bound slope set
    """
    if p.sided is Sided.TWO:
        return TruncatedPoint(p.omega, p.coords, p.start - 1, p.sided, p.tail)
    nxt = p.value_at(p.end + 1) if p.tail.resolved else None
    if nxt is not None:
        return TruncatedPoint(p.omega, p.coords[1:] + (nxt,), 1, p.sided, p.tail)
    if len(p.coords) < 2:
        raise ShiftError("Cannot shift a length-1 point whose tail is unknown")
    return TruncatedPoint(p.omega, p.coords[1:], 1, p.sided, p.tail)


def shift_n(p: TruncatedPoint, n: int) -> TruncatedPoint:
    for _ in range(n):
        p = shift(p)
    return p


@dataclass(frozen=True)
class MetricBound:
    lower: Fraction
    upper: Fraction

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def below(self, threshold: Fraction) -> bool:
        """Certified D < threshold; raises when the bound straddles the threshold"""
        if self.upper < threshold:
            return True
        if self.lower >= threshold:
            return False
        raise UndecidableBound(f"D lies in [{self.lower}, {self.upper}], which straddles {threshold}")

    def to_json(self) -> Dict:
        return {"lower": rational_to_json(self.lower), "upper": rational_to_json(self.upper)}


def _side_behaviour(p: TruncatedPoint, right: bool) -> Tuple[str, Optional[object]]:
    """Classify how a point continues on one side: decay, const, periodic or unknown"""
    edge = p.coords[-1] if right else p.coords[0]
    kind = p.tail.kind
    if kind is TailKind.CONST:
        return "const", p.tail.value
    if kind is TailKind.PERIODIC:
        return "periodic", p.tail.period
    if edge == 0:
        return "const", ZERO
    if kind is TailKind.ZERO:
        slope = p.omega.contracting() if right else p.omega.expanding()
        if slope is not None:
            return "decay", None
    return "unknown", None


def _settle_after(a: Tuple[str, object], b: Tuple[str, object]) -> Optional[int]:
    """Terms needed beyond both windows before a side's supremum is known, None if never"""
    kinds = {a[0], b[0]}
    if "unknown" in kinds:
        # every later coordinate is undetermined and weighs less than the first one
        return 1
    if kinds <= {"decay"} or kinds <= {"const"}:
        return 1
    if kinds == {"decay", "const"}:
        const = a[1] if a[0] == "const" else b[1]
        return 1 if const == 0 else None
    if "decay" in kinds:
        return None
    periods = [1 if kind == "const" else value for kind, value in (a, b)]
    return lcm(*periods)


def _scan_order(sided: Sided) -> Iterator[int]:
    if sided is Sided.ONE:
        i = 1
        while True:
            yield i
            i += 1
    yield 0
    k = 1
    while True:
        yield -k
        yield k
        k += 1


def metric_D(x: TruncatedPoint, y: TruncatedPoint, scan_limit: int = DEFAULT_SCAN_LIMIT) -> MetricBound:
    """
    Certified bounds on D(x, y) = sup |x_i - y_i| / 2^|i|

    Scans indices by nonincreasing weight. Stops when the weight drops to the
    running supremum, or once each side's tails make the remaining terms
    provably smaller. Undetermined coordinates widen the upper bound by their
    weight; hitting the scan limit leaves a certified tail bound.
    """
    if x.sided is not y.sided:
        raise MetricError(f"Cannot compare a {x.sided.value} point with a {y.sided.value} point")
    if set(x.omega.slopes) != set(y.omega.slopes):
        raise MetricError(f"Points are bound to different slope sets {x.omega} and {y.omega}")
    if x.coords == y.coords and x.start == y.start and x.tail == y.tail:
        return MetricBound(ZERO, ZERO)

    best = ZERO
    unknown_weight = ZERO
    right_hi = max(x.end, y.end)
    left_lo = min(x.start, y.start)
    right_rule = _settle_after(_side_behaviour(x, True), _side_behaviour(y, True))
    left_rule = _settle_after(_side_behaviour(x, False), _side_behaviour(y, False))
    right_done = left_done = False
    left_done = x.sided is Sided.ONE

    scanned = 0
    for i in _scan_order(x.sided):
        if right_done and left_done:
            break
        on_right = i >= 0
        if (on_right and right_done) or (not on_right and left_done):
            continue
        weight = Fraction(1, 2 ** abs(i))
        if weight <= best:
            break
        if scanned >= scan_limit:
            unknown_weight = max(unknown_weight, weight)
            break
        scanned += 1

        vx, vy = x.value_at(i), y.value_at(i)
        if vx is None or vy is None:
            unknown_weight = max(unknown_weight, weight)
        else:
            best = max(best, abs(vx - vy) * weight)

        if on_right and right_rule is not None and i >= right_hi + right_rule:
            right_done = True
        if not on_right and left_rule is not None and i <= left_lo - left_rule:
            left_done = True

    bound = MetricBound(best, max(best, unknown_weight))
    logger.debug(f"metric_D: [{bound.lower}, {bound.upper}] after {scanned} indices")
    return bound


def arc_range(omega: SlopeSet, word: Union[SlopeWord, Sequence[int]]) -> List[Fraction]:
    """
    Per-coordinate maxima of the arc following a one-sided word

    Args:
        omega: slope set
        word: letters a(1)..a(N-1), at least one

    Returns:
        Maxima of x_1..x_N over the arc
    """
    letters = word.letters if isinstance(word, SlopeWord) else tuple(word)
    if not letters:
        raise DomainError("Arc words need at least one letter")
    partial = [ONE]
    for letter in letters:
        partial.append(partial[-1] * omega.slope(letter))
    alpha = min(1 / value for value in partial)
    return [alpha * value for value in partial]


def enumerate_arcs(omega: SlopeSet, depth: int, cap: int = DEFAULT_ARC_CAP) -> List[Tuple[SlopeWord, List[Fraction]]]:
    """All words of a given depth with their arc maxima, in lexicographic order"""
    if depth < 1:
        raise DomainError(f"Depth must be positive, got {depth}")
    count = omega.M ** depth
    if count > cap:
        raise ArcCapExceeded(f"{count} arcs at depth {depth} exceed the cap {cap}", cap)
    arcs = []
    for letters in product(range(1, omega.M + 1), repeat=depth):
        word = SlopeWord(letters)
        arcs.append((word, arc_range(omega, word)))
    logger.info(f"Enumerated {len(arcs)} arcs of {omega} at depth {depth}")
    return arcs


def is_endpoint(p: TruncatedPoint) -> bool:
    """Arc-maximal points: the supremum of the coordinates is attained and equals 1"""
    if p.sided is not Sided.ONE:
        return False
    top = max(p.coords)
    if p.tail.kind is TailKind.CONST:
        top = max(top, p.tail.value)
    elif p.tail.kind is TailKind.ZERO and p.omega.contracting() is None:
        return False
    return top == 1


def _nc_pair(omega: SlopeSet) -> Tuple[Fraction, Fraction]:
    report = validate_slope_set(omega, Profile.LF_INDUCING)
    if report.nc_pair is not None:
        return omega.slope(report.nc_pair[0]), omega.slope(report.nc_pair[1])
    r, rho = omega.contracting(), omega.expanding()
    if r is None or rho is None:
        raise SlopeSetError(f"{omega} has no slopes on both sides of 1; endpoints cannot be built")
    logger.warning(f"{omega} is not LF-inducing; endpoint search may not terminate")
    return r, rho


def _origin_endpoint(omega: SlopeSet, p: TruncatedPoint, eps: Fraction, scan_limit: int) -> TruncatedPoint:
    rho = omega.expanding()
    if rho is None or omega.contracting() is None:
        raise SlopeSetError(f"{omega} needs slopes on both sides of 1 to approximate the top")
    for J in range(1, scan_limit):
        coords = [1 / rho ** (J - j) for j in range(J + 1)]
        e = TruncatedPoint.make(omega, coords, tail=Tail.zero())
        if metric_D(p, e, scan_limit).upper < eps:
            return e
    raise UncertifiableError(f"No endpoint within {eps} of the top found below depth {scan_limit}")


def endpoint_approx(
    omega: SlopeSet,
    p: TruncatedPoint,
    eps: Fraction,
    max_steps: int = DEFAULT_ENDPOINT_STEPS,
    scan_limit: int = DEFAULT_SCAN_LIMIT,
) -> TruncatedPoint:
    """
    An arc-maximal point e with certified D(p, e) < eps

    The prefix x_1..x_N of p (2^-(N+1) < eps) is kept along its word; the word is
    extended greedily with the never-connecting pair until the running value
    exceeds 1/(1+eta), and the arc is rescaled so that its top coordinate is 1.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if p.sided is not Sided.ONE:
        raise DomainError("Endpoint approximation is defined for one-sided points")
    check = validate_point(omega, p)
    if not check:
        raise DomainError(f"Point is not valid at index {check.index}: {check.reason}")

    if p.coords[0] == 0:
        return _origin_endpoint(omega, p, eps, scan_limit)

    r, rho = _nc_pair(omega)
    N = 1
    while Fraction(1, 2 ** (N + 1)) >= eps:
        N += 1
    eta = eps

    for attempt in range(8):
        values = [p.value_at(i) for i in range(1, N + 1)]
        if any(v is None for v in values):
            raise UncertifiableError(
                f"Point window [1, {p.end}] with unknown tail is shorter than the {N} coordinates needed"
            )
        top = max(values)
        s = values[-1]
        extension: List[Fraction] = []
        steps = 0
        while top * (1 + eta) <= 1 and s * (1 + eta) <= 1:
            s = s * rho if s * rho <= 1 else s * r
            extension.append(s)
            steps += 1
            if steps > max_steps:
                raise UncertifiableError(f"Endpoint search exceeded {max_steps} steps")
        scale = max(top, s)
        coords = [v / scale for v in values + extension]
        e = TruncatedPoint.make(omega, coords, tail=Tail.zero())
        bound = metric_D(p, e, scan_limit)
        if bound.upper < eps and is_endpoint(e):
            logger.debug(f"endpoint_approx: N={N}, extension {len(extension)}, D <= {bound.upper}")
            return e
        logger.warning(f"endpoint_approx attempt {attempt + 1} certified only {bound.upper}; deepening")
        N += 1
        eta /= 2
    raise UncertifiableError(f"Could not certify an endpoint within {eps}")


def _sequences_equal(a: TruncatedPoint, b: TruncatedPoint, lo: int, hi: int) -> bool:
    return all(a.value_at(i) == b.value_at(i) for i in range(lo, hi + 1))


def periodic_approximant(
    omega: SlopeSet,
    p: TruncatedPoint,
    eps: Fraction,
    scan_limit: int = DEFAULT_SCAN_LIMIT,
) -> Tuple[TruncatedPoint, int]:
    """
    Periodic point within eps of a two-sided point, for reciprocal-closed slope sets

    Alternates the block y = (x_-N..x_(N-1)) with its reversal (x_N..x_-(N-1)) and
    reports the smallest period verified on the concrete block.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not omega.is_reciprocal_closed():
        raise ReciprocalClosureError(f"{omega} is not closed under reciprocals")
    if p.sided is not Sided.TWO:
        raise DomainError("Periodic approximants are built for two-sided points")
    check = validate_point(omega, p)
    if not check:
        raise DomainError(f"Point is not valid at index {check.index}: {check.reason}")

    N = 1
    while Fraction(1, 2 ** (N + 1)) >= eps:
        N += 1
    window = [p.value_at(i) for i in range(-N, N + 1)]
    if any(v is None for v in window):
        raise ShiftError(f"Point must determine indices [-{N}, {N}], window is [{p.start}, {p.end}]")

    forward = window[:-1]
    backward = list(reversed(window[1:]))
    block = forward + backward

    period = next(
        d for d in range(1, len(block) + 1)
        if len(block) % d == 0 and all(block[i] == block[i + d] for i in range(len(block) - d))
    )
    z = TruncatedPoint.make(omega, block, start=-N, sided=Sided.TWO, tail=Tail.periodic(period))

    check = validate_point(omega, z)
    if not check:
        raise UncertifiableError(f"Palindromic block failed validation at {check.index}: {check.reason}")
    shifted = shift_n(z, period)
    if not _sequences_equal(z, shifted, z.start - period, z.end + period):
        raise UncertifiableError(f"Block does not repeat after {period} shifts")
    bound = metric_D(z, p, scan_limit)
    if not bound.upper < eps:
        raise UncertifiableError(f"Periodic approximant certified only D <= {bound.upper}")
    logger.debug(f"periodic_approximant: N={N}, period {period}, D <= {bound.upper}")
    return z, period
