"""
Exact rational helpers: parsing, prime exponent vectors and the never-connect test
"""
import logging
import re
from fractions import Fraction
from typing import Dict, Union

from sympy import Matrix, factorint

from .errors import DomainError

logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[Fraction, int, str]

_RATIONAL_RE = re.compile(r"^\s*(-?\d+)\s*(?:/\s*(\d+))?\s*$")


def parse_rational(text: RationalLike) -> Fraction:
    """
    Parse "p/q" or a bare integer into an exact Fraction

    Decimal strings and floats are rejected so that every parameter stays exact.
    """
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool) or isinstance(text, float):
        raise DomainError(f"Refusing inexact value {text!r}; use p/q")
    if isinstance(text, int):
        return Fraction(text)
    match = _RATIONAL_RE.match(str(text))
    if not match:
        raise DomainError(f"Not an exact rational: {text!r} (expected p/q or an integer)")
    num, den = match.group(1), match.group(2)
    if den is not None and int(den) == 0:
        raise DomainError(f"Zero denominator in {text!r}")
    return Fraction(int(num), int(den) if den is not None else 1)


def format_rational(r: Fraction) -> str:
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def rational_to_json(r: Fraction) -> Dict[str, str]:
    return {"num": str(r.numerator), "den": str(r.denominator)}


def rational_from_json(data: Dict[str, str]) -> Fraction:
    num, den = str(data["num"]), str(data["den"])
    if not re.fullmatch(r"-?\d+", num) or not re.fullmatch(r"\d+", den) or int(den) == 0:
        raise DomainError(f"Malformed rational {data!r}")
    return Fraction(int(num), int(den))


def decimal_string(r: Fraction, digits: int = 12) -> str:
    """Fixed-point rendering rounded half-up; an annotation only, never parsed back"""
    scale = 10 ** digits
    scaled = (abs(r) * scale * 2 + 1) // 2
    sign = "-" if r < 0 else ""
    whole, frac = divmod(int(scaled), scale)
    return f"{sign}{whole}.{frac:0{digits}d}"


def exponent_vector(r: Fraction) -> Dict[int, int]:
    """
    Prime exponent vector of a positive rational

    Args:
        r: positive rational

    Returns:
        Mapping prime -> exponent with zero exponents omitted
    """
    if r <= 0:
        raise DomainError(f"Exponent vector needs a positive rational, got {r}")
    vector: Dict[int, int] = {}
    for prime, power in factorint(r.numerator).items():
        vector[prime] = vector.get(prime, 0) + power
    for prime, power in factorint(r.denominator).items():
        vector[prime] = vector.get(prime, 0) - power
    return {p: e for p, e in sorted(vector.items()) if e != 0}


def from_exponent_vector(vector: Dict[int, int]) -> Fraction:
    value = Fraction(1)
    for prime, power in vector.items():
        value *= Fraction(prime) ** power
    return value


def never_connect(r: Fraction, rho: Fraction) -> bool:
    """
    True iff r^k = rho^l has no solution other than k = l = 0

    Only multiplicative independence is tested; the ordering r < 1 < rho is
    checked by slope set validation.
    """
    if r <= 0 or rho <= 0:
        raise DomainError(f"never_connect needs positive rationals, got {r}, {rho}")
    u, v = exponent_vector(r), exponent_vector(rho)
    primes = sorted(set(u) | set(v))
    if not primes:
        return False
    rank = Matrix([[u.get(p, 0) for p in primes], [v.get(p, 0) for p in primes]]).rank()
    logger.debug(f"never_connect({r}, {rho}): exponent rank {rank}")
    return rank == 2
