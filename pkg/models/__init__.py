"""
Models package: exact domain types for relations, shift spaces and certificates
"""
from .errors import CapExceeded, LelekError
from .intervals import IntervalUnion
from .relation import Profile, SlopeSet
from .shift_space import Sided, SlopeWord, Tail, TruncatedPoint
from .specification import OrbitSegment, Specification, TraceCertificate

__all__ = [
    'CapExceeded',
    'IntervalUnion',
    'LelekError',
    'OrbitSegment',
    'Profile',
    'Sided',
    'SlopeSet',
    'SlopeWord',
    'Specification',
    'Tail',
    'TraceCertificate',
    'TruncatedPoint',
]
