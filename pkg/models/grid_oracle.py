"""
Brute-force dense-grid image oracle for cross-checking exact interval images
"""
import logging
from fractions import Fraction

import numpy as np

from .intervals import IntervalUnion
from .relation import SlopeSet

logger = logging.getLogger(__name__)

GRID = 6 ** 7


def grid_mask(A: IntervalUnion, grid: int = GRID) -> np.ndarray:
    idx = np.arange(grid + 1, dtype=np.int64)
    mask = np.zeros(grid + 1, dtype=bool)
    for lo, hi in A:
        start = -((-lo.numerator * grid) // lo.denominator)
        end = (hi.numerator * grid) // hi.denominator
        mask |= (idx >= start) & (idx <= end)
    return mask


def grid_image(omega: SlopeSet, A: IntervalUnion, n: int, grid: int = GRID) -> np.ndarray:
    """Boolean mask of grid indices hit by n rounded forward steps starting from A"""
    mask = grid_mask(A, grid)
    factors = [float(w) for w in omega.slopes]
    for _ in range(n):
        points = np.flatnonzero(mask)
        nxt = np.zeros_like(mask)
        for factor in factors:
            image = np.rint(points * factor).astype(np.int64)
            nxt[image[image <= grid]] = True
        mask = nxt
    return mask


def tolerance(omega: SlopeSet, n: int, grid: int = GRID) -> Fraction:
    """Rounding error allowance after n steps"""
    growth = max(max(omega.slopes), Fraction(1))
    return (2 * growth ** n + 2) / grid


def agrees_with(omega: SlopeSet, A: IntervalUnion, n: int, exact: IntervalUnion, samples: int = 64,
                grid: int = GRID) -> bool:
    """
    Compare the oracle against an exact image in both directions

    Every oracle point must be within tolerance of the exact set and every
    sampled exact point within tolerance of an oracle point.
    """
    mask = grid_image(omega, A, n, grid)
    tol = float(tolerance(omega, n, grid))
    hit = np.flatnonzero(mask) / grid

    if exact.is_empty:
        return hit.size == 0
    lows = np.array([float(lo) for lo, _ in exact])
    highs = np.array([float(hi) for _, hi in exact])
    if hit.size:
        gap = np.maximum(lows[None, :] - hit[:, None], hit[:, None] - highs[None, :])
        if np.any(np.min(np.maximum(gap, 0.0), axis=1) > tol):
            logger.debug("grid oracle: an oracle point lies outside the exact image")
            return False
    else:
        return False

    for lo, hi in exact:
        for x in np.linspace(float(lo), float(hi), num=max(2, samples // max(1, len(exact)))):
            if np.min(np.abs(hit - x)) > tol:
                logger.debug(f"grid oracle: exact point {x} has no oracle neighbour")
                return False
    return True
