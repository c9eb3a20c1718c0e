"""
Normalized finite unions of closed rational subintervals of [0,1]
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Tuple

from .errors import DomainError
from .rational import rational_from_json, rational_to_json

Interval = Tuple[Fraction, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def _check_bounds(lo: Fraction, hi: Fraction) -> None:
    if lo > hi:
        raise DomainError(f"Interval [{lo}, {hi}] has lo > hi")
    if lo < 0 or hi > 1:
        raise DomainError(f"Interval [{lo}, {hi}] is not inside [0,1]")


@dataclass(frozen=True)
class IntervalUnion:
    """
    Sorted, pairwise disjoint, non-touching closed intervals

    Build instances through ``IntervalUnion.of``; the constructor assumes its
    input is already normalized.
    """
    intervals: Tuple[Interval, ...] = ()

    @classmethod
    def of(cls, pairs: Iterable[Tuple]) -> IntervalUnion:
        items = []
        for lo, hi in pairs:
            lo, hi = Fraction(lo), Fraction(hi)
            _check_bounds(lo, hi)
            items.append((lo, hi))
        return cls(tuple(_merge(items)))

    @classmethod
    def empty(cls) -> IntervalUnion:
        return cls(())

    @classmethod
    def unit(cls) -> IntervalUnion:
        return cls(((ZERO, ONE),))

    @classmethod
    def interval(cls, lo, hi) -> IntervalUnion:
        return cls.of([(lo, hi)])

    def normalized(self) -> IntervalUnion:
        return IntervalUnion.of(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    def __iter__(self):
        return iter(self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def has_interior(self) -> bool:
        return any(lo < hi for lo, hi in self.intervals)

    def min(self) -> Optional[Fraction]:
        return self.intervals[0][0] if self.intervals else None

    def max(self) -> Optional[Fraction]:
        return self.intervals[-1][1] if self.intervals else None

    def contains_point(self, x: Fraction) -> bool:
        return any(lo <= x <= hi for lo, hi in self.intervals)

    def contains_interval(self, lo: Fraction, hi: Fraction) -> bool:
        """True iff [lo, hi] lies inside one component (components never touch)"""
        return any(a <= lo and hi <= b for a, b in self.intervals)

    def contains(self, other: IntervalUnion) -> bool:
        return all(self.contains_interval(lo, hi) for lo, hi in other.intervals)

    def union(self, other: IntervalUnion) -> IntervalUnion:
        return IntervalUnion(tuple(_merge(list(self.intervals) + list(other.intervals))))

    def intersect_interval(self, lo: Fraction, hi: Fraction) -> IntervalUnion:
        pieces = []
        for a, b in self.intervals:
            start, end = max(a, lo), min(b, hi)
            if start <= end:
                pieces.append((start, end))
        return IntervalUnion(tuple(pieces))

    def scaled(self, factor: Fraction) -> IntervalUnion:
        """factor·A ∩ [0,1] for a positive factor"""
        pieces = []
        for lo, hi in self.intervals:
            start = lo * factor
            if start > 1:
                break
            pieces.append((start, min(hi * factor, ONE)))
        return IntervalUnion(tuple(pieces))

    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.intervals), ZERO)

    def complement_gaps(self) -> List[Interval]:
        """
        Gaps of [0,1] minus A as (lo, hi) pairs with lo < hi

        Boundary gaps include the boundary point of [0,1]; interior gaps are open.
        """
        if not self.intervals:
            return [(ZERO, ONE)]
        gaps = []
        cursor = ZERO
        for lo, hi in self.intervals:
            if lo > cursor:
                gaps.append((cursor, lo))
            cursor = hi
        if cursor < 1:
            gaps.append((cursor, ONE))
        return gaps

    def to_json(self) -> List[List[dict]]:
        return [[rational_to_json(lo), rational_to_json(hi)] for lo, hi in self.intervals]

    @classmethod
    def from_json(cls, data: List[List[dict]]) -> IntervalUnion:
        return cls.of((rational_from_json(lo), rational_from_json(hi)) for lo, hi in data)

    def __str__(self) -> str:
        if not self.intervals:
            return "∅"
        return " ∪ ".join(f"[{lo}, {hi}]" for lo, hi in self.intervals)


def _merge(items: List[Interval]) -> List[Interval]:
    merged: List[Interval] = []
    for lo, hi in sorted(items):
        if merged and lo <= merged[-1][1]:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return merged
