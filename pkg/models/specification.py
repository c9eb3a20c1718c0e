"""
Orbit segments, specifications and tracing certificates
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from .errors import DomainError, TrajectoryError
from .rational import decimal_string, format_rational, rational_from_json, rational_to_json
from .relation import SlopeSet, in_relation
from .shift_space import TruncatedPoint


@dataclass(frozen=True)
class OrbitSegment:
    """Coordinates x(k)..x(l) of a finite trajectory"""
    k: int
    l: int
    values: Tuple[Fraction, ...]

    def __post_init__(self):
        if self.k < 1 or self.l < self.k:
            raise DomainError(f"Segment range [{self.k}, {self.l}] must satisfy 1 <= k <= l")
        if len(self.values) != self.l - self.k + 1:
            raise DomainError(f"Segment [{self.k}, {self.l}] needs {self.l - self.k + 1} values, got {len(self.values)}")
        if any(not 0 <= v <= 1 for v in self.values):
            raise DomainError(f"Segment [{self.k}, {self.l}] has values outside [0,1]")

    @classmethod
    def make(cls, k: int, values: Sequence) -> OrbitSegment:
        return cls(k, k + len(values) - 1, tuple(Fraction(v) for v in values))

    def value(self, index: int) -> Fraction:
        return self.values[index - self.k]

    def check_trajectory(self, omega: SlopeSet) -> None:
        for offset, (x, y) in enumerate(zip(self.values, self.values[1:])):
            if not in_relation(omega, x, y):
                raise TrajectoryError(
                    f"Segment [{self.k}, {self.l}] breaks the relation at index {self.k + offset}: ({x}, {y})"
                )

    def to_json(self) -> Dict:
        return {"k": self.k, "l": self.l, "values": [rational_to_json(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: Dict) -> OrbitSegment:
        return cls(int(data["k"]), int(data["l"]), tuple(rational_from_json(v) for v in data["values"]))


@dataclass(frozen=True)
class Specification:
    segments: Tuple[OrbitSegment, ...]

    def __post_init__(self):
        if not self.segments:
            raise DomainError("A specification needs at least one segment")
        for left, right in zip(self.segments, self.segments[1:]):
            if right.k <= left.l:
                raise DomainError(f"Segments [{left.k}, {left.l}] and [{right.k}, {right.l}] overlap or are unordered")

    @classmethod
    def of(cls, segments: Sequence[OrbitSegment]) -> Specification:
        return cls(tuple(segments))

    def gaps(self) -> List[int]:
        return [right.k - left.l for left, right in zip(self.segments, self.segments[1:])]

    def is_spaced(self, N: int) -> bool:
        return all(gap >= N for gap in self.gaps())

    @property
    def last_index(self) -> int:
        return self.segments[-1].l

    def to_json(self) -> Dict:
        return {"segments": [segment.to_json() for segment in self.segments]}

    @classmethod
    def from_json(cls, data: Dict) -> Specification:
        return cls(tuple(OrbitSegment.from_json(s) for s in data["segments"]))


@dataclass(frozen=True)
class ShiftSegment:
    """Orbit segment σ^k(x)..σ^l(x) of the shift map"""
    k: int
    l: int
    point: TruncatedPoint

    def __post_init__(self):
        if self.k < 0 or self.l < self.k:
            raise DomainError(f"Shift segment range [{self.k}, {self.l}] must satisfy 0 <= k <= l")


@dataclass(frozen=True)
class ShiftSpecification:
    segments: Tuple[ShiftSegment, ...]

    def __post_init__(self):
        for left, right in zip(self.segments, self.segments[1:]):
            if right.k <= left.l:
                raise DomainError(f"Shift segments [{left.k}, {left.l}] and [{right.k}, {right.l}] overlap")

    def gaps(self) -> List[int]:
        return [right.k - left.l for left, right in zip(self.segments, self.segments[1:])]


@dataclass(frozen=True)
class DescendingIntervalTrajectory:
    intervals: Tuple[Tuple[Fraction, Fraction], ...]
    case: str = ""
    widened: bool = False

    def __len__(self) -> int:
        return len(self.intervals)

    def diameters(self) -> List[Fraction]:
        return [b - a for a, b in self.intervals]

    def to_json(self) -> Dict:
        return {
            "case": self.case,
            "widened": self.widened,
            "intervals": [[rational_to_json(a), rational_to_json(b)] for a, b in self.intervals],
        }


@dataclass(frozen=True)
class TraceEntry:
    segment: int
    index: int
    distance: Fraction


@dataclass
class TraceCertificate:
    point: TruncatedPoint
    eps: Fraction
    horizon: int
    entries: List[TraceEntry] = field(default_factory=list)

    @property
    def max_distance(self) -> Fraction:
        return max((e.distance for e in self.entries), default=Fraction(0))

    def holds(self) -> bool:
        return all(e.distance <= self.eps for e in self.entries)

    def to_json(self) -> Dict:
        return {
            "kind": "trace",
            "eps": rational_to_json(self.eps),
            "horizon": self.horizon,
            "point": self.point.to_json(),
            "entries": [
                {"segment": e.segment, "index": e.index, "distance": rational_to_json(e.distance)}
                for e in self.entries
            ],
        }

    @classmethod
    def from_json(cls, omega: SlopeSet, data: Dict) -> TraceCertificate:
        return cls(
            point=TruncatedPoint.from_json(omega, data["point"]),
            eps=rational_from_json(data["eps"]),
            horizon=int(data["horizon"]),
            entries=[
                TraceEntry(int(e["segment"]), int(e["index"]), rational_from_json(e["distance"]))
                for e in data["entries"]
            ],
        )

    def table(self, digits: int = 12) -> str:
        """Human-readable per-index distance table"""
        lines = [f"{'segment':>7} {'index':>7}  distance", "-" * 40]
        for e in self.entries:
            lines.append(f"{e.segment:>7} {e.index:>7}  {format_rational(e.distance)} ~ {decimal_string(e.distance, digits)}")
        lines.append(f"max distance {format_rational(self.max_distance)} <= eps {format_rational(self.eps)}")
        return "\n".join(lines)
