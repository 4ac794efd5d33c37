"""
The infinite group walk S = {W, SW, S, NE}.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from qwalk.continuation.poles import PrincipalPart
from qwalk.elliptic.rationality import period_ratio, pin_ratio
from qwalk.elliptic.uniformization import Uniformization
from qwalk.walk.stepset import parse_stepset

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

infinite_steps = parse_stepset("W,SW,S,NE")


def expected_fy_poles(U: Uniformization) -> List[PrincipalPart]:
    """Simple poles of f_y at 0, ω₃/2 and ω₂ - ω₃/2 with residues -1/z, 1/2z, 1/2z."""
    z = U.z
    return [
        PrincipalPart(0, {1: -1 / z}),
        PrincipalPart(U.w3 / 2, {1: 1 / (2 * z)}),
        PrincipalPart(U.w2 - U.w3 / 2, {1: 1 / (2 * z)}),
    ]


def expected_fx_poles(U: Uniformization) -> List[PrincipalPart]:
    """Simple poles of f_x at 0, ω₃/2 and ω₃ with residues -1/2z, 1/z, -1/2z."""
    z = U.z
    return [
        PrincipalPart(0, {1: -1 / (2 * z)}),
        PrincipalPart(U.w3 / 2, {1: 1 / z}),
        PrincipalPart(U.w3, {1: -1 / (2 * z)}),
    ]


def expected_zeros(U: Uniformization) -> Dict[str, Tuple[complex, complex]]:
    """Zeros of x in the cell and of y in the cell shifted by ω₃/2."""
    return {
        "x": (U.w3 / 2, U.w2 - U.w3 / 2),
        "y": (U.w3, U.w2),
    }


def _first_fraction(lo: float, hi: float, max_denominator: int) -> Optional[Fraction]:
    """The fraction with the smallest denominator strictly inside (lo, hi)."""
    for denominator in range(2, max_denominator + 1):
        numerator = math.floor(lo * denominator) + 1
        if numerator < hi * denominator:
            return Fraction(numerator, denominator)
    return None


def ratio_fraction(
    z_range: Tuple[float, float] = (0.075, 0.2),
    max_denominator: int = 64,
    n_grid: int = 12,
) -> Optional[Tuple[Fraction, Tuple[float, float]]]:
    """A fraction k/ℓ attained by ω₃/ω₂ in z_range, with a bracket for it.

    The ratio is sampled on a grid and the fraction with the smallest
    denominator lying strictly between the ratios at two neighbouring grid
    points is returned with those two points.

    Returns:
        The fraction and its bracket, or None if no fraction with
        ℓ ≤ max_denominator is crossed.
    """
    grid = np.linspace(*z_range, n_grid)
    ratios = [period_ratio(infinite_steps, z) for z in grid]
    best = None
    for i in range(n_grid - 1):
        lo, hi = sorted(ratios[i : i + 2])
        frac = _first_fraction(lo, hi, max_denominator)
        if frac is None:
            continue
        if best is None or frac.denominator < best[0].denominator:
            best = (frac, (float(grid[i]), float(grid[i + 1])))

    if best is not None:
        logger.debug(f"Ratio {best[0]} is crossed for z in {best[1]}")
    return best


def pinned_z(
    k: int, l: int, z_range: Tuple[float, float] = None  # noqa: E741
) -> float:
    """The weight z at which ω₃/ω₂ = k/ℓ for the infinite group walk."""
    return pin_ratio(infinite_steps, k, l, z_range=z_range)
