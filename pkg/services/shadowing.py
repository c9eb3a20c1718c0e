"""
Pseudo-orbit generators, finite-horizon shadowing search and the growing-images diagnostic
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple, Union

from models.errors import (
    BranchCapExceeded,
    DomainError,
    PseudoOrbitError,
    UncertifiableError,
)
from models.intervals import ONE, ZERO, IntervalUnion
from models.rational import rational_from_json, rational_to_json
from models.relation import (
    DEFAULT_INTERVAL_CAP,
    SlopeSet,
    alpha_max,
    hausdorff_to_unit,
    interval_image,
    slope_products,
)
from models.shift_space import (
    DEFAULT_SCAN_LIMIT,
    SlopeWord,
    Tail,
    TruncatedPoint,
    constant_point,
    metric_D,
    shift,
    shift_n,
    validate_point,
)

logger = logging.getLogger(__name__)

DEFAULT_BRANCH_CAP = 2_000_000
DEFAULT_STALL_WINDOW = 10

THREE_LINES = SlopeSet.of([3, 1, "1/2"])
TWO_LINES = SlopeSet.of(["1/2", 3])


@dataclass(frozen=True)
class PseudoOrbit:
    points: Tuple[TruncatedPoint, ...]
    delta: Fraction

    def __len__(self) -> int:
        return len(self.points)


def verify_pseudo_orbit(po: PseudoOrbit, scan_limit: int = DEFAULT_SCAN_LIMIT) -> bool:
    """
    Check D(σ(x_k), x_(k+1)) < delta for every consecutive pair

    Raises UndecidableBound when a certified bound straddles delta.
    """
    for k, point in enumerate(po.points):
        check = validate_point(point.omega, point)
        if not check:
            raise PseudoOrbitError(f"Point {k} is invalid at index {check.index}: {check.reason}")
    for k in range(len(po.points) - 1):
        bound = metric_D(shift(po.points[k]), po.points[k + 1], scan_limit)
        if not bound.below(po.delta):
            logger.debug(f"Pseudo-orbit step {k} has D >= {bound.lower}, delta={po.delta}")
            return False
    return True


def staircase_pseudo_orbit(n0: int, delta=None, settle: int = 1, omega: SlopeSet = THREE_LINES) -> PseudoOrbit:
    """Constant points 1/2, 1/2 + 1/(2 n0), ..., 1 followed by settle copies of 1̄"""
    if n0 < 1:
        raise DomainError(f"n0 must be positive, got {n0}")
    if not omega.has_identity:
        raise PseudoOrbitError(f"Constant points need slope 1 in {omega}")
    delta = Fraction(delta) if delta is not None else Fraction(1, 2 * n0)
    levels = [Fraction(1, 2) + Fraction(k, 2 * n0) for k in range(n0 + 1)] + [ONE] * settle
    return PseudoOrbit(tuple(constant_point(omega, c) for c in levels), delta)


def _loop_point(omega: SlopeSet, slopes: Sequence[Fraction], z: Fraction) -> TruncatedPoint:
    if len(slopes) == 1:
        return constant_point(omega, z)
    coords = [z]
    for w in slopes[:-1]:
        coords.append(coords[-1] * w)
    return TruncatedPoint.make(omega, coords, tail=Tail.periodic(len(slopes)))


def diagonal_pseudo_orbit(
    omega: SlopeSet,
    word: Union[SlopeWord, Sequence],
    a,
    delta,
    settle: int = 1,
) -> PseudoOrbit:
    """
    Staircase of M-periodic loops climbing from a to 1

    Each loop follows the word (slope product 1, ascending slopes, so every
    partial product is at most 1) and contributes its M shifts; consecutive
    loop levels differ by less than delta.
    """
    slopes = word.slopes(omega) if isinstance(word, SlopeWord) else [Fraction(w) for w in word]
    for w in slopes:
        omega.letter(w)
    total = ONE
    for w in slopes:
        total *= w
    if total != 1:
        raise PseudoOrbitError(f"Word product is {total}, not 1")
    if list(slopes) != sorted(slopes):
        raise PseudoOrbitError(f"Word {[str(w) for w in slopes]} is not sorted ascending")
    a, delta = Fraction(a), Fraction(delta)
    if not 0 < a < 1 or delta <= 0:
        raise DomainError(f"Need 0 < a < 1 and delta > 0, got a={a}, delta={delta}")

    steps = int((1 - a) / delta) + 1
    points: List[TruncatedPoint] = []
    M = len(slopes)
    for t in range(steps + 1):
        loop = _loop_point(omega, slopes, a + t * (1 - a) / steps)
        points.extend(shift_n(loop, s) for s in range(M))
    for _ in range(settle):
        points.extend(points[-M:])
    logger.info(f"Diagonal pseudo-orbit: {steps + 1} loops of length {M}, {len(points)} points")
    return PseudoOrbit(tuple(points), delta)


def separation_radius(omega: SlopeSet, M: int, a) -> Fraction:
    """
    Radius rho around a inside which y ∈ F^M(x) forces y = x

    With g the distance from 1 to the nearest other product in 𝒜(M),
    |αx - x| ≥ g(a - rho) = 2 rho for x > a - rho.
    """
    a = Fraction(a)
    others = [alpha for alpha in slope_products(omega, M) if alpha != 1]
    if not others:
        raise DomainError(f"𝒜({M}) of {omega} contains only 1")
    g = min(abs(alpha - 1) for alpha in others)
    return g * a / (2 + g)


def diagonal_shadow_threshold(omega: SlopeSet, M: int, a) -> Fraction:
    a = Fraction(a)
    return min(separation_radius(omega, M, a) / 2 ** M, (1 - a) / 2)


@dataclass
class _Window:
    """Feasible values of the first coordinate t, with open or closed ends"""
    lo: Fraction
    hi: Fraction
    lo_closed: bool = True
    hi_closed: bool = True

    @property
    def empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    def clip(self, lo: Fraction, hi: Fraction, closed: bool) -> _Window:
        new = _Window(self.lo, self.hi, self.lo_closed, self.hi_closed)
        if lo > new.lo:
            new.lo, new.lo_closed = lo, closed
        elif lo == new.lo:
            new.lo_closed = new.lo_closed and closed
        if hi < new.hi:
            new.hi, new.hi_closed = hi, closed
        elif hi == new.hi:
            new.hi_closed = new.hi_closed and closed
        return new

    def contains(self, t: Fraction) -> bool:
        above = t > self.lo or (t == self.lo and self.lo_closed)
        below = t < self.hi or (t == self.hi and self.hi_closed)
        return above and below

    def pick(self, preferred: Optional[Fraction] = None) -> Fraction:
        if preferred is not None and self.contains(preferred):
            return preferred
        if self.lo == self.hi:
            return self.lo
        return (self.lo + self.hi) / 2


@dataclass(frozen=True)
class Constraint:
    index: int
    k: int
    j: int
    target: Fraction
    radius: Fraction

    def to_json(self) -> Dict:
        return {
            "index": self.index,
            "k": self.k,
            "j": self.j,
            "target": rational_to_json(self.target),
            "radius": rational_to_json(self.radius),
        }


@dataclass
class NoShadowCertificate:
    eps: Fraction
    horizon: int
    depth: int
    branches: int
    constraints: List[Constraint] = field(default_factory=list)
    pruned: Dict[int, int] = field(default_factory=dict)

    def to_json(self) -> Dict:
        return {
            "kind": "no_shadow",
            "eps": rational_to_json(self.eps),
            "horizon": self.horizon,
            "depth": self.depth,
            "branches": self.branches,
            "constraints": [c.to_json() for c in self.constraints],
            "pruned": {str(index): count for index, count in sorted(self.pruned.items())},
        }

    @classmethod
    def from_json(cls, data: Dict) -> NoShadowCertificate:
        if data.get("kind") != "no_shadow":
            raise DomainError(f"Not a no-shadow certificate: kind={data.get('kind')!r}")
        return cls(
            eps=rational_from_json(data["eps"]),
            horizon=int(data["horizon"]),
            depth=int(data["depth"]),
            branches=int(data["branches"]),
            constraints=[
                Constraint(int(c["index"]), int(c["k"]), int(c["j"]),
                           rational_from_json(c["target"]), rational_from_json(c["radius"]))
                for c in data["constraints"]
            ],
            pruned={int(index): int(count) for index, count in data["pruned"].items()},
        )


@dataclass
class ShadowWitness:
    word: SlopeWord
    window: _Window
    point: TruncatedPoint

    def to_json(self) -> Dict:
        return {
            "word": list(self.word.letters),
            "t_low": rational_to_json(self.window.lo),
            "t_high": rational_to_json(self.window.hi),
            "low_closed": self.window.lo_closed,
            "high_closed": self.window.hi_closed,
            "point": self.point.to_json(),
        }


@dataclass
class ShadowResult:
    feasible: bool
    witness: Optional[ShadowWitness] = None
    certificate: Optional[NoShadowCertificate] = None

    @property
    def status(self) -> str:
        return "SAT" if self.feasible else "UNSAT"


def constraint_width(eps: Fraction) -> int:
    """Largest j ≥ 1 with eps·2^j ≤ 1; weights beyond it cannot reach eps"""
    W = 0
    while eps * 2 ** (W + 1) <= 1:
        W += 1
    return W


def _constraint_table(po: PseudoOrbit, eps: Fraction, horizon: int) -> Dict[int, List[Constraint]]:
    W = constraint_width(eps)
    table: Dict[int, List[Constraint]] = {}
    for k in range(horizon):
        for j in range(1, W + 1):
            target = po.points[k].value_at(j)
            if target is None:
                raise DomainError(f"Pseudo-orbit point {k} does not determine coordinate {j}")
            table.setdefault(k + j, []).append(Constraint(k + j, k, j, target, eps * 2 ** j))
    return table


def _apply(window: _Window, P: Fraction, constraints: Sequence[Constraint]) -> _Window:
    window = window.clip(ZERO, 1 / P, True)
    for c in constraints:
        if window.empty:
            break
        window = window.clip((c.target - c.radius) / P, (c.target + c.radius) / P, False)
    return window


def _search_depth(omega: SlopeSet, eps: Fraction, horizon: int, depth: int) -> int:
    needed = horizon + constraint_width(eps) - 1
    if depth < needed:
        raise DomainError(f"Depth {depth} does not cover the {needed} constrained coordinates")
    if min(omega.slopes) <= 1:
        # any prefix extends forever along a slope ≤ 1
        return max(needed, 1)
    return depth


def shadow_feasible(
    omega: SlopeSet,
    po: PseudoOrbit,
    eps,
    horizon: int,
    depth: int,
    branch_cap: int = DEFAULT_BRANCH_CAP,
) -> ShadowResult:
    """
    Decide whether some orbit y has D(σ^k(y), x_k) < eps for k < horizon

    Branches over slope words in lexicographic order and propagates the
    constraints |t·P_i - x_k(j)| < eps·2^j on the first coordinate t exactly.

    Args:
        omega: slope set of the candidate orbit
        po: pseudo-orbit to shadow
        eps: shadowing tolerance
        horizon: number of pseudo-orbit points constrained
        depth: number of orbit coordinates explored
        branch_cap: node budget; exceeding it is inconclusive

    Returns:
        SAT with a re-verified witness, or UNSAT with its certificate
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if not 1 <= horizon <= len(po.points):
        raise DomainError(f"Horizon {horizon} must lie in 1..{len(po.points)}")
    D = _search_depth(omega, eps, horizon, depth)
    table = _constraint_table(po, eps, horizon)
    logger.info(f"Shadow search: eps={eps}, horizon={horizon}, depth={D}, {sum(map(len, table.values()))} constraints")

    pruned: Counter = Counter()
    branches = 0
    slopes = omega.slopes

    def search(P: Fraction, window: _Window, i: int, letters: Tuple[int, ...]):
        nonlocal branches
        branches += 1
        if branches > branch_cap:
            raise BranchCapExceeded(f"Shadow search exceeded {branch_cap} branches", branch_cap)
        window = _apply(window, P, table.get(i, ()))
        if window.empty:
            pruned[i] += 1
            return None
        if i == D:
            return letters, window, P
        for letter, w in enumerate(slopes, start=1):
            found = search(P * w, window, i + 1, letters + (letter,))
            if found:
                return found
        return None

    found = search(ONE, _Window(ZERO, ONE), 1, ())
    constraints = [c for index in sorted(table) for c in table[index]]
    if found is None:
        certificate = NoShadowCertificate(eps, horizon, D, branches, constraints, dict(pruned))
        logger.info(f"Shadow search UNSAT after {branches} branches")
        return ShadowResult(False, certificate=certificate)

    letters, window, _ = found
    t = window.pick(po.points[0].value_at(1))
    coords = [t]
    for letter in letters:
        coords.append(coords[-1] * omega.slope(letter))
    witness_point = TruncatedPoint.make(omega, coords)
    if not validate_point(omega, witness_point) or not all(
        abs(witness_point.value_at(c.index) - c.target) < c.radius for c in constraints
    ):
        raise UncertifiableError("Shadow witness failed re-verification")
    logger.info(f"Shadow search SAT after {branches} branches")
    return ShadowResult(True, witness=ShadowWitness(SlopeWord(letters), window, witness_point))


def brute_force_shadow(omega: SlopeSet, po: PseudoOrbit, eps, horizon: int, depth: int) -> Tuple[bool, int]:
    """
    Independent check by enumerating every slope word of the search depth

    Returns:
        (feasible, number of words examined)
    """
    eps = Fraction(eps)
    D = _search_depth(omega, eps, horizon, depth)
    table = _constraint_table(po, eps, horizon)
    words = 0
    for letters in product(range(omega.M), repeat=D - 1):
        words += 1
        window = _Window(ZERO, ONE)
        P = ONE
        window = _apply(window, P, table.get(1, ()))
        for i, letter in enumerate(letters, start=2):
            if window.empty:
                break
            P *= omega.slopes[letter]
            window = _apply(window, P, table.get(i, ()))
        if not window.empty:
            return True, words
    return False, words


@dataclass
class SeriesResult:
    values: List[Tuple[int, Fraction]]
    verdict: str

    def to_json(self) -> Dict:
        return {
            "verdict": self.verdict,
            "series": [{"n": n, "d": rational_to_json(d)} for n, d in self.values],
        }


def series_verdict(distances: Sequence[Fraction], window: int = DEFAULT_STALL_WINDOW) -> str:
    """
    Classify a Hausdorff series

    consistent-with-mixing: reaches 0, or the last window+1 values strictly decrease.
    mixing-obstructed: the last window+1 values are positive and never drop below the
    first of them, which includes an exact stall.
    """
    if len(distances) < window + 1:
        return "inconclusive"
    recent = list(distances[-(window + 1):])
    if recent[-1] == 0 or all(x > y for x, y in zip(recent, recent[1:])):
        return "consistent-with-mixing"
    if min(recent) > 0 and min(recent[1:]) >= recent[0]:
        return "mixing-obstructed"
    return "inconclusive"


def growing_images_series(
    omega: SlopeSet,
    A: IntervalUnion,
    n_max: int,
    window: int = DEFAULT_STALL_WINDOW,
    cap: int = DEFAULT_INTERVAL_CAP,
) -> SeriesResult:
    """Exact d_H(F^n(A), [0,1]) for n = 1..n_max with a mixing verdict"""
    if A.is_empty or not A.has_interior:
        raise DomainError("The starting set needs non-empty interior")
    if n_max < 1:
        raise DomainError(f"n_max must be positive, got {n_max}")
    values = []
    current = A
    for n in range(1, n_max + 1):
        current = interval_image(omega, current, "forward", cap)
        values.append((n, hausdorff_to_unit(current)))
    verdict = series_verdict([d for _, d in values], window)
    logger.info(f"Growing-images series for {omega} up to n={n_max}: {verdict}")
    return SeriesResult(values, verdict)


def two_line_gap(M: int) -> Tuple[Fraction, Fraction]:
    """Predicted complementary gap of F^M([5/6, 1]) under slopes {1/2, 3}"""
    alpha = alpha_max(TWO_LINES, M)
    lower = alpha / 6 if M >= 3 else ZERO
    return lower, 5 * alpha / 6
