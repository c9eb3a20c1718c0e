"""
Constructive specification tracing for relations in the tracing family
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil
from typing import Dict, List, Optional, Sequence, Tuple, Union

from models.errors import ConnectorError, DomainError, IndexOutOfRange, SpacingError, TrajectoryError
from models.intervals import ONE, IntervalUnion
from models.rational import rational_to_json
from models.relation import (
    DEFAULT_INTERVAL_CAP,
    SlopeSet,
    interval_image,
    reachable_layers,
    require_trace_family,
)
from models.shift_space import Tail, TruncatedPoint, validate_point
from models.specification import (
    DescendingIntervalTrajectory,
    OrbitSegment,
    ShiftSegment,
    ShiftSpecification,
    Specification,
    TraceCertificate,
    TraceEntry,
)

logger = logging.getLogger(__name__)

THREE = Fraction(3)
HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ChainStage:
    """One density step: multiply by c = 3^m/2^n, new left end low = c·previous low"""
    m: int
    n: int
    c: Fraction
    low: Fraction

    @property
    def steps(self) -> int:
        return self.m + self.n


@dataclass(frozen=True)
class ReachWitness:
    block: int
    p: int
    q: int
    a_delta: Fraction
    chain: Tuple[ChainStage, ...]

    @property
    def steps(self) -> int:
        return self.p + self.q + sum(stage.steps for stage in self.chain)

    def to_json(self) -> Dict:
        return {
            "block": self.block,
            "p": self.p,
            "q": self.q,
            "a_delta": rational_to_json(self.a_delta),
            "chain": [
                {"m": s.m, "n": s.n, "c": rational_to_json(s.c), "low": rational_to_json(s.low)}
                for s in self.chain
            ],
            "steps": self.steps,
        }


@dataclass(frozen=True)
class ReachHorizon:
    N: int
    delta: Fraction
    gamma: Fraction
    k: int
    witnesses: Tuple[ReachWitness, ...]

    def witness(self, block: int) -> ReachWitness:
        if not 1 <= block < self.k:
            raise DomainError(f"Block {block} is not in 1..{self.k - 1}")
        return self.witnesses[block - 1]

    def to_json(self) -> Dict:
        return {
            "N": self.N,
            "delta": rational_to_json(self.delta),
            "gamma": rational_to_json(self.gamma),
            "k": self.k,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


@lru_cache(maxsize=4096)
def _power_ratio_in(lo: Fraction, hi: Fraction) -> Tuple[int, int]:
    """
    Minimal m+n with lo < 3^m/2^n < hi

    For fixed m the smallest admissible n is the only candidate, and m + n*(m)
    is strictly increasing, so the first feasible m wins. n*(m) is the bit
    length of floor(3^m / hi).
    """
    if not 0 < lo < hi:
        raise DomainError(f"Empty window ({lo}, {hi})")
    m = 0
    while True:
        power = 3 ** m
        n = (power * hi.denominator // hi.numerator).bit_length()
        if power * lo.denominator > lo.numerator * 2 ** n:
            return m, n
        m += 1


def _crossing_window(block: int, k: int) -> Tuple[Fraction, Fraction]:
    """Ratios r with r·block/k < 1 < r·(block+1)/k and r·block/k below the block midpoint bound"""
    lo = Fraction(k, block + 1)
    return lo, lo * Fraction(2 * block + 1, 2 * block)


@lru_cache(maxsize=64)
def _reach_table(delta: Fraction, gamma: Fraction) -> ReachHorizon:
    k = int(2 / delta) + 1
    witnesses = []
    for block in range(1, k):
        # 3^p/2^q maps [block/k, (block+1)/k] across 1 with a_delta at most halfway to 1
        p, q = _power_ratio_in(*_crossing_window(block, k))
        a_delta = Fraction(3 ** p, 2 ** q) * Fraction(block, k)
        chain = []
        low = a_delta
        while low > gamma:
            m, n = _power_ratio_in(low, ONE)
            c = Fraction(3 ** m, 2 ** n)
            chain.append(ChainStage(m, n, c, c * low))
            low = c * low
        witnesses.append(ReachWitness(block, p, q, a_delta, tuple(chain)))
    N = max(w.steps for w in witnesses)
    logger.info(f"Reach horizon for delta={delta}, gamma={gamma}: N={N} over {k - 1} blocks")
    return ReachHorizon(N, delta, gamma, k, tuple(witnesses))


def reach_horizon(omega: SlopeSet, delta, gamma) -> ReachHorizon:
    """
    Horizon N with [gamma, 1] ⊆ F^n([a, b]) for every n ≥ N and b - a > delta

    Only the sub-relation {3, 1, 1/2} is used, so the table depends on (delta, gamma) alone.
    """
    require_trace_family(omega)
    delta, gamma = Fraction(delta), Fraction(gamma)
    if not 0 < delta < 1 or not 0 < gamma < 1:
        raise DomainError(f"delta and gamma must lie in (0,1), got {delta}, {gamma}")
    return _reach_table(delta, gamma)


def verify_reach(omega: SlopeSet, a, b, gamma, n: int, cap: int = DEFAULT_INTERVAL_CAP) -> bool:
    """Exact check of [gamma, 1] ⊆ F^n([a, b])"""
    a, b, gamma = Fraction(a), Fraction(b), Fraction(gamma)
    if not 0 < a < b <= 1:
        raise DomainError(f"verify_reach needs 0 < a < b <= 1, got [{a}, {b}]")
    layers = reachable_layers(omega, IntervalUnion.interval(a, b), n, gamma, cap)
    return layers[-1].contains_interval(gamma, ONE)


def _follow_values(ys: Sequence[Fraction], start: int, stop: int, a_start: Fraction, eps: Fraction):
    intervals = [(a_start, ys[start])]
    a = a_start
    for i in range(start, stop):
        c = ys[i + 1] / ys[i]
        a = max(c * a, ys[i + 1] - eps)
        intervals.append((a, ys[i + 1]))
    return intervals


def _run_from(ys: Sequence[Fraction], start: int, a_start: Fraction, eps: Fraction):
    p = len(ys) - 1
    third = eps / 3
    stop = p
    if ys[p] < third:
        stop = max(i for i in range(start, p + 1) if ys[i] >= third)
    part = _follow_values(ys, start, stop, a_start, eps)
    return part + [part[-1]] * (p - stop)


def trajectory_failures(
    omega: SlopeSet,
    ys: Sequence[Fraction],
    intervals: Sequence[Tuple[Fraction, Fraction]],
    eps: Fraction,
) -> List[str]:
    """Names of violated conclusions; empty when the trajectory is sound"""
    failures = []
    a0, b0 = intervals[0]
    if not (eps / 9 <= a0 <= b0 <= 1):
        failures.append("start: [a_0, b_0] not inside [eps/9, 1]")
    for i, ((a, b), y) in enumerate(zip(intervals, ys)):
        if not (0 < a <= b <= 1 and y - eps <= a and b <= y + eps):
            failures.append(f"ball: [a_{i}, b_{i}] not inside the eps-ball around y_{i}")
            break
    a, b = intervals[-1]
    if b - a < eps * eps / 9:
        failures.append("diameter: final interval shorter than eps^2/9")
    for i in range(len(intervals) - 1):
        a, b = intervals[i]
        image = interval_image(omega, IntervalUnion.interval(a, b))
        if not image.contains_interval(*intervals[i + 1]):
            failures.append(f"nesting: [a_{i + 1}, b_{i + 1}] not inside the image of [a_{i}, b_{i}]")
            break
    return failures


def descending_trajectory(omega: SlopeSet, segment: Union[OrbitSegment, Sequence], eps) -> DescendingIntervalTrajectory:
    """
    Descending interval trajectory around a finite trajectory

    Args:
        omega: slope set in the tracing family
        segment: the trajectory y_0..y_p
        eps: tolerance in (0, 1]

    Returns:
        Intervals [a_i, b_i] with [a_0, b_0] ⊆ [eps/9, 1], each inside the eps-ball
        around y_i, nested under the relation, and a final diameter of at least eps^2/9
    """
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    if not isinstance(segment, OrbitSegment):
        segment = OrbitSegment.make(1, segment)
    segment.check_trajectory(omega)
    ys = segment.values
    for i, (x, y) in enumerate(zip(ys, ys[1:])):
        if not (x / 3 <= y <= 3 * x):
            raise TrajectoryError(f"Step {i} of the trajectory ({x} -> {y}) is outside [x/3, 3x]")

    widened = False
    if ys[0] < eps:
        if all(y < eps for y in ys):
            case = "small"
            intervals = [(eps / 9, eps)] * len(ys)
        else:
            case = "rising"
            first = next(i for i, y in enumerate(ys) if y >= eps)
            head = [(eps / 9, ys[first - 1])] * (first - 1)
            intervals = head + _run_from(ys, first - 1, eps / 9, eps)
    else:
        case = "decaying" if ys[-1] < eps / 3 else "steady"
        intervals = _run_from(ys, 0, ys[0] - 2 * eps / 9, eps)
        a, b = intervals[-1]
        if b - a < eps * eps / 9:
            widened = True
            logger.warning(f"Narrow final interval for y_0={ys[0]}, eps={eps}; widening a_0")
            intervals = _run_from(ys, 0, max(eps / 9, ys[0] - eps), eps)

    failures = trajectory_failures(omega, ys, intervals, eps)
    if failures:
        raise TrajectoryError(f"Descending trajectory ({case}) failed: {'; '.join(failures)}")
    return DescendingIntervalTrajectory(tuple(intervals), case, widened)


def _stage_values(u: Fraction, m: int, n: int) -> List[Fraction]:
    """Values after each step of n halvings followed by m triplings"""
    values = []
    v = u
    for _ in range(n):
        v = v * HALF
        values.append(v)
    for _ in range(m):
        v = v * THREE
        values.append(v)
    return values


def build_connector(horizon: ReachHorizon, a: Fraction, b: Fraction, target: Fraction, gap: int):
    """
    Orbit of length gap from some x0 ∈ [a, b] ending exactly at target

    Follows the reach witness of the block inside [a, b] backwards from the
    target; identity steps pad the front.

    Returns:
        (x0, values after each of the gap steps)
    """
    block = ceil(a * horizon.k)
    witness = horizon.witness(block)
    dump = {"a": str(a), "b": str(b), "target": str(target), "gap": gap, "block": block}
    if not horizon.gamma <= target <= 1:
        raise ConnectorError(f"Target {target} is outside [gamma, 1]", dump)

    lows = [witness.a_delta] + [stage.low for stage in witness.chain]
    pieces: List[List[Fraction]] = []
    v = target
    for j in reversed(range(len(witness.chain))):
        stage = witness.chain[j]
        if v >= lows[j]:
            pieces.append([v] * stage.steps)
        else:
            u = v / stage.c
            pieces.append(_stage_values(u, stage.m, stage.n))
            v = u
    x0 = v * Fraction(2 ** witness.q, 3 ** witness.p)
    path = _stage_values(x0, witness.p, witness.q)
    for piece in reversed(pieces):
        path.extend(piece)
    if len(path) > gap:
        raise ConnectorError(f"Witness needs {len(path)} steps but the gap is {gap}", dump)
    path = [x0] * (gap - len(path)) + path

    previous = x0
    for value in path:
        if not (0 <= value <= 1 and (value == previous or value in (previous * THREE, previous * HALF))):
            dump["failed_at"] = str(value)
            logger.error(f"Connector broke the relation: {dump}")
            raise ConnectorError("Connector left the sub-relation {3, 1, 1/2}", dump)
        previous = value
    if not (a <= x0 <= b and path[-1] == target):
        dump["x0"] = str(x0)
        logger.error(f"Connector missed its endpoints: {dump}")
        raise ConnectorError("Connector does not join the segment interval to the target", dump)
    return x0, path


def _pull_back(omega: SlopeSet, value: Fraction, lo: Fraction, hi: Fraction) -> Optional[Fraction]:
    for w in omega.slopes:
        u = value / w
        if lo <= u <= hi:
            return u
    return None


def trace_specification(
    omega: SlopeSet,
    spec: Specification,
    eps,
    cap: int = DEFAULT_INTERVAL_CAP,
) -> Tuple[TruncatedPoint, TraceCertificate]:
    """
    Trace an N-spaced specification within eps by one orbit

    Per-segment descending trajectories are joined by connectors read off the
    reach witness table for delta = eps^2/9 and gamma = eps/18. The prefix and
    the tail are constant.
    """
    require_trace_family(omega)
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if eps > 1:
        logger.info(f"eps={eps} exceeds 1; tracing at eps=1")
    work_eps = min(eps, ONE)
    horizon = reach_horizon(omega, work_eps * work_eps / 9, work_eps / 18)

    if not spec.is_spaced(horizon.N):
        raise SpacingError(
            f"Specification gaps {spec.gaps()} are shorter than the required spacing {horizon.N}",
            horizon.N,
        )
    logger.info(f"Tracing {len(spec.segments)} segments at eps={work_eps} with N={horizon.N}")

    trajectories = [descending_trajectory(omega, segment, work_eps) for segment in spec.segments]
    y: Dict[int, Fraction] = {}
    target = trajectories[-1].intervals[-1][1]

    for j in reversed(range(len(spec.segments))):
        segment, traj = spec.segments[j], trajectories[j]
        y[segment.l] = target
        for i in range(segment.l - 1, segment.k - 1, -1):
            lo, hi = traj.intervals[i - segment.k]
            value = _pull_back(omega, y[i + 1], lo, hi)
            if value is None:
                dump = {"segment": j, "index": i, "value": str(y[i + 1])}
                logger.error(f"Pull-back failed inside a segment: {dump}")
                raise ConnectorError(f"No preimage of {y[i + 1]} in [{lo}, {hi}]", dump)
            y[i] = value
        if j > 0:
            previous = spec.segments[j - 1]
            a, b = trajectories[j - 1].intervals[-1]
            x0, path = build_connector(horizon, a, b, y[segment.k], segment.k - previous.l)
            for offset, value in enumerate(path[:-1]):
                y[previous.l + 1 + offset] = value
            target = x0

    first = spec.segments[0].k
    for i in range(1, first):
        y[i] = y[first]
    coords = [y[i] for i in range(1, spec.last_index + 1)]
    point = TruncatedPoint.make(omega, coords, tail=Tail.const(coords[-1]))

    entries = [
        TraceEntry(s, i, abs(segment.value(i) - point.value_at(i)))
        for s, segment in enumerate(spec.segments)
        for i in range(segment.k, segment.l + 1)
    ]
    certificate = TraceCertificate(point=point, eps=eps, horizon=horizon.N, entries=entries)

    check = validate_point(omega, point)
    if not check or not certificate.holds():
        dump = {"index": check.index, "reason": check.reason, "max_distance": str(certificate.max_distance)}
        logger.error(f"Traced point failed its own certificate: {dump}")
        raise ConnectorError("Traced point failed verification", dump)
    logger.info(f"Traced specification: {len(coords)} coordinates, max distance {certificate.max_distance}")
    return point, certificate


def verify_trace(spec: Specification, y: TruncatedPoint, eps) -> bool:
    """Direct check of |x_j(i) - y(i)| <= eps over every constrained index"""
    eps = Fraction(eps)
    for segment in spec.segments:
        for i in range(segment.k, segment.l + 1):
            value = y.value_at(i)
            if value is None:
                raise IndexOutOfRange(f"Traced point does not determine index {i}")
            if abs(segment.value(i) - value) > eps:
                return False
    return True


@dataclass(frozen=True)
class TranslationResult:
    spec: Union[Specification, ShiftSpecification]
    extension: int
    spacing_delta: int
    eps_factor: Fraction


def extension_for(eps: Fraction) -> int:
    """Smallest N with 1/2^N < eps"""
    N = 0
    while Fraction(1, 2 ** N) >= eps:
        N += 1
    return N


def translate_spec(omega: SlopeSet, spec, eps, direction: str) -> TranslationResult:
    """
    Translate between shift-map specifications and coordinate specifications

    shift_to_CR turns σ^[k,l](x) into the coordinates x(k)..x(l+N) with 1/2^N < eps,
    so the shift spacing must exceed the coordinate spacing by N. CR_to_shift
    reindexes [k, l] to [k-1, l-1]. Both directions trace at eps/2.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise DomainError(f"eps must be positive, got {eps}")
    if direction == "shift_to_CR":
        N = extension_for(eps)
        segments = []
        for segment in spec.segments:
            if segment.k < 1:
                raise DomainError("Shift segments must start at k >= 1 to map onto coordinates")
            values = []
            for i in range(segment.k, segment.l + N + 1):
                value = segment.point.value_at(i)
                if value is None:
                    raise IndexOutOfRange(f"Shift segment point does not determine coordinate {i}")
                values.append(value)
            segments.append(OrbitSegment(segment.k, segment.l + N, tuple(values)))
        return TranslationResult(Specification.of(segments), N, N, HALF)
    if direction == "CR_to_shift":
        segments = []
        for segment in spec.segments:
            coords = list(segment.values)
            rho = omega.max_slope
            for _ in range(segment.k - 1):
                if coords[0] / rho > 1:
                    raise DomainError(f"Cannot extend segment [{segment.k}, {segment.l}] backwards inside [0,1]")
                coords.insert(0, coords[0] / rho)
            point = TruncatedPoint.make(omega, coords, tail=Tail.unknown())
            segments.append(ShiftSegment(segment.k - 1, segment.l - 1, point))
        return TranslationResult(ShiftSpecification(tuple(segments)), 0, 0, HALF)
    raise DomainError(f"Unknown direction {direction!r}")
