"""
Detection of rational period ratios ω₃/ω₂ = k/ℓ.
"""

import logging
import multiprocessing
from fractions import Fraction
from functools import partial
from typing import Iterator, List, Optional, Tuple

import numpy as np
from monty.json import MSONable
from scipy.optimize import brentq

from qwalk.elliptic.curve import curve_data
from qwalk.elliptic.uniformization import Periods, periods
from qwalk.util import get_nworkers, get_progress_bar
from qwalk.walk.stepset import StepSet

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

_period_floor = 1e-12
_pin_tol = 1e-9


class RationalityResult(MSONable):
    """Outcome of a rationality detection.

    Args:
        ratio: The period ratio ω₃/ω₂.
        k: Numerator of the detected fraction, or None.
        l: Denominator of the detected fraction, or None.
        error: |ratio - k/l|, or None.
        z: The step weight, if known.
    """

    def __init__(
        self,
        ratio: float,
        k: Optional[int] = None,
        l: Optional[int] = None,  # noqa: E741
        error: Optional[float] = None,
        z: Optional[float] = None,
    ):
        self.ratio = ratio
        self.k = k
        self.l = l  # noqa: E741
        self.error = error
        self.z = z

    @property
    def detected(self) -> bool:
        return self.k is not None

    @property
    def fraction(self) -> Optional[Tuple[int, int]]:
        return (self.k, self.l) if self.detected else None

    def __str__(self):
        if self.detected:
            return f"{self.k}/{self.l} (error {self.error:.2e})"
        return "not-detected"


def convergents(x: float, max_denominator: int) -> Iterator[Fraction]:
    """Continued fraction convergents of x with denominators up to a bound."""
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    remainder = x
    while True:
        a = int(np.floor(remainder))
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        if k > max_denominator:
            return
        yield Fraction(h, k)

        frac = remainder - a
        if frac < 1e-15:
            return
        remainder = 1 / frac


def detect_ratio(
    curve_periods: Periods,
    l_max: int = 64,
    tol: float = 1e-8,
    period_error: float = _period_floor,
) -> RationalityResult:
    """Detect whether ω₃/ω₂ is rational with a small denominator.

    The first continued fraction convergent k/ℓ with ℓ ≤ l_max and
    |ω₃/ω₂ - k/ℓ| < tol is reported.

    Args:
        curve_periods: The periods.
        l_max: The largest denominator.
        tol: The detection tolerance.
        period_error: Accuracy of the computed periods.

    Returns:
        The detection result.
    """
    if tol < 10 * period_error:
        raise ValueError(
            f"Rationality tolerance {tol} is below the numeric floor "
            f"{10 * period_error}"
        )

    ratio = curve_periods.ratio
    for frac in convergents(ratio, l_max):
        error = abs(ratio - frac.numerator / frac.denominator)
        if error < tol and 0 < frac.numerator < frac.denominator:
            return RationalityResult(
                ratio, frac.numerator, frac.denominator, error
            )
    return RationalityResult(ratio)


def period_ratio(steps: StepSet, z: float) -> float:
    return periods(curve_data(steps, z)).ratio


def _scan_point(z, steps=None, l_max=64, tol=1e-8):
    result = detect_ratio(periods(curve_data(steps, z)), l_max=l_max, tol=tol)
    result.z = float(z)
    return result


def scan_ratios(
    steps: StepSet,
    z_grid,
    l_max: int = 64,
    tol: float = 1e-8,
    nworkers: int = -1,
    progress_bar: bool = False,
) -> List[RationalityResult]:
    """Detect rational period ratios on a grid of step weights.

    Args:
        steps: The step set.
        z_grid: The step weights.
        l_max: The largest denominator.
        tol: The detection tolerance.
        nworkers: The number of worker processes (-1 for all).
        progress_bar: Whether to show a progress bar.

    Returns:
        One result per grid point, in grid order.
    """
    z_grid = [float(z) for z in np.asarray(z_grid).ravel()]
    func = partial(_scan_point, steps=steps, l_max=l_max, tol=tol)
    nworkers = min(get_nworkers(nworkers), len(z_grid))

    if progress_bar:
        z_iter = get_progress_bar(z_grid, desc="scanning")
    else:
        z_iter = z_grid

    if nworkers > 1:
        with multiprocessing.Pool(nworkers) as pool:
            return list(pool.imap(func, z_iter))
    return [func(z) for z in z_iter]


def pin_ratio(
    steps: StepSet,
    k: int,
    l: int,  # noqa: E741
    z_range: Tuple[float, float] = None,
    n_grid: int = 24,
    tol: float = _pin_tol,
) -> float:
    """Find the step weight at which ω₃/ω₂ = k/ℓ.

    The ratio is sampled on a grid to bracket the root, which is then refined
    with Brent's method. Non-monotonic sampled ratios are reported.

    Args:
        steps: The step set.
        k: The numerator.
        l: The denominator.
        z_range: The search interval. Defaults to (0, 1/|S|) with small margins.
        n_grid: The number of sample points used for bracketing.
        tol: The required accuracy of the ratio at the returned weight.

    Returns:
        The step weight.
    """
    target = k / l
    if z_range is None:
        z_range = (0.02 / steps.size, 0.98 / steps.size)

    grid = np.linspace(*z_range, n_grid)
    values = np.array([period_ratio(steps, z) for z in grid]) - target

    diffs = np.diff(values)
    if not (np.all(diffs > 0) or np.all(diffs < 0)):
        logger.warning(
            "Period ratio is not monotonic in z on the search interval, "
            "the pinned weight may not be unique"
        )

    crossings = np.nonzero(np.sign(values[:-1]) != np.sign(values[1:]))[0]
    if len(crossings) == 0:
        raise RuntimeError(
            f"Period ratio {k}/{l} is not attained for z in {z_range} "
            f"(range {values.min() + target:.6f} to {values.max() + target:.6f})"
        )

    i = crossings[0]
    z = brentq(
        lambda w: period_ratio(steps, w) - target, grid[i], grid[i + 1], xtol=1e-15
    )

    error = abs(period_ratio(steps, z) - target)
    if error > tol:
        raise RuntimeError(f"Pinned weight z = {z} misses {k}/{l} by {error:.2e}")

    logger.info(f"Pinned ω₃/ω₂ = {k}/{l} at z = {z:.15g}")
    return float(z)
