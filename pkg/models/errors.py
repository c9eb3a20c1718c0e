"""
Exception hierarchy for the dynamics toolkit
"""
from typing import Dict, Optional


class LelekError(ValueError):
    """Base class for every domain failure raised by the toolkit"""


class SlopeSetError(LelekError):
    pass


class DomainError(LelekError):
    """A value lies outside [0,1] or a positive parameter is not positive"""


class EmptySetError(LelekError):
    pass


class CapExceeded(LelekError):
    """A configured search or size cap was hit; the answer is inconclusive"""

    def __init__(self, message: str, cap: int):
        super().__init__(message)
        self.cap = cap


class IntervalCapExceeded(CapExceeded):
    pass


class ArcCapExceeded(CapExceeded):
    pass


class BranchCapExceeded(CapExceeded):
    pass


class MetricError(LelekError):
    pass


class ShiftError(LelekError):
    pass


class UncertifiableError(LelekError):
    pass


class ReciprocalClosureError(LelekError):
    pass


class TrajectoryError(LelekError):
    pass


class SpacingError(LelekError):
    """Specification gaps are shorter than the reach horizon"""

    def __init__(self, message: str, required: int):
        super().__init__(message)
        self.required = required


class ConnectorError(LelekError):
    """Internal failure while building a connecting orbit"""

    def __init__(self, message: str, dump: Optional[Dict] = None):
        super().__init__(message)
        self.dump = dump or {}


class IndexOutOfRange(LelekError):
    pass


class PseudoOrbitError(LelekError):
    pass


class UndecidableBound(LelekError):
    """A certified metric interval straddles the threshold being tested"""
