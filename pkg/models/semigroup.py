"""
Numerical semigroup helpers used to certify eventual diagonal powers
"""
from functools import reduce
from math import gcd
from typing import Iterable, List

from .errors import DomainError


def minimal_generators(members: Iterable[int]) -> List[int]:
    """Members that are not sums of smaller members (the semigroup's minimal generating set)"""
    values = sorted(set(m for m in members if m > 0))
    generators: List[int] = []
    if not values:
        return generators
    top = values[-1]
    reachable = [False] * (top + 1)
    reachable[0] = True
    for value in values:
        if not reachable[value]:
            generators.append(value)
            for total in range(value, top + 1):
                if reachable[total - value]:
                    reachable[total] = True
    return generators


def frobenius_number(generators: Iterable[int]) -> int:
    """
    Largest integer not representable as a nonnegative combination of generators

    Args:
        generators: positive integers with gcd 1

    Returns:
        The Frobenius number, -1 when 1 is a generator
    """
    gens = sorted(set(generators))
    if not gens or gens[0] <= 0:
        raise DomainError(f"Frobenius number needs positive generators, got {gens}")
    if reduce(gcd, gens) != 1:
        raise DomainError(f"Generators {gens} have gcd {reduce(gcd, gens)} != 1")
    if gens[0] == 1:
        return -1
    # Schur bound
    bound = (gens[0] - 1) * (gens[-1] - 1) - 1
    representable = [False] * (bound + 1)
    representable[0] = True
    for total in range(1, bound + 1):
        representable[total] = any(g <= total and representable[total - g] for g in gens)
    largest = -1
    for total in range(bound, -1, -1):
        if not representable[total]:
            largest = total
            break
    return largest
