"""
The kernel curve: discriminants of the kernel in both variables and their
ordered branch points.
"""

import logging
from typing import Optional, Tuple

import numpy as np
from monty.json import MSONable
from numpy.polynomial import polynomial as P

from qwalk.constants import root_imag_tol
from qwalk.walk.stepset import KernelCoefficients, StepSet, kernel_coefficients

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

_degenerate_tol = 1e-13


class CurveData(MSONable):
    """Discriminants and branch points of the kernel curve K(x, y) = 0.

    Args:
        steps: The step set.
        z: The step weight.
        d: Coefficients of d(x) = b(x)² - 4a(x)c(x) in ascending powers.
        dt: Coefficients of d̃(y) = b̃(y)² - 4ã(y)c̃(y) in ascending powers.
        x_branch: Ordered branch points (x1, x2, x3, x4), infinity allowed.
        y_branch: Ordered branch points (y1, y2, y3, y4), infinity allowed.
    """

    def __init__(
        self,
        steps: StepSet,
        z: float,
        d: np.ndarray,
        dt: np.ndarray,
        x_branch: Optional[np.ndarray] = None,
        y_branch: Optional[np.ndarray] = None,
    ):
        self.steps = steps
        self.z = z
        self.d = np.asarray(d, dtype=float)
        self.dt = np.asarray(dt, dtype=float)
        self.x_branch = None if x_branch is None else np.asarray(x_branch, dtype=float)
        self.y_branch = None if y_branch is None else np.asarray(y_branch, dtype=float)

    @property
    def kernel(self) -> KernelCoefficients:
        return kernel_coefficients(self.steps, self.z)


def discriminants(steps: StepSet, z: float) -> CurveData:
    """Compute the discriminants of the kernel in y and in x.

    Args:
        steps: The step set.
        z: The step weight.

    Returns:
        The curve data, without branch points.
    """
    k = kernel_coefficients(steps, z)
    d = P.polysub(P.polymul(k.b, k.b), 4 * P.polymul(k.a, k.c))
    dt = P.polysub(P.polymul(k.bt, k.bt), 4 * P.polymul(k.at, k.ct))
    return CurveData(steps, z, _pad(d), _pad(dt))


def _pad(coeffs, length=5):
    coeffs = np.asarray(coeffs, dtype=float)
    return np.pad(coeffs, (0, length - len(coeffs)))


def branch_points(curve: CurveData) -> CurveData:
    """Order the branch points of the kernel curve.

    x1 < x2 are the two roots of d in (-1, 1). With p = (x1 + x2)/2, the remaining
    roots are ordered by τ = 1/(x - p) (τ = 0 at infinity): x3 has the largest τ
    and so is reached first when moving right from x2 (through infinity if
    needed), while x4 is the other. The same rule orders the roots of d̃.

    Args:
        curve: The curve data from :func:`discriminants`.

    Returns:
        The curve data with ordered branch points.
    """
    x_branch = _ordered_roots(curve.d, "x", curve.z)
    y_branch = _ordered_roots(curve.dt, "y", curve.z)
    return CurveData(curve.steps, curve.z, curve.d, curve.dt, x_branch, y_branch)


def curve_data(steps: StepSet, z: float) -> CurveData:
    """Discriminants and ordered branch points of the kernel curve."""
    return branch_points(discriminants(steps, z))


def polish_roots(coeffs, roots, iterations: int = 8):
    """Refine polynomial roots by Newton iterations."""
    deriv = P.polyder(coeffs)
    roots = np.asarray(roots, dtype=complex).copy()
    for _ in range(iterations):
        slope = P.polyval(roots, deriv)
        mask = np.abs(slope) > 0
        roots[mask] -= P.polyval(roots[mask], coeffs) / slope[mask]
    return roots


def _ordered_roots(coeffs, name: str, z: float) -> np.ndarray:
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    degree = len(coeffs) - 1
    if degree not in (3, 4):
        raise RuntimeError(
            f"Discriminant in {name} has degree {degree} at z={z}, expected 3 or 4"
        )

    roots = polish_roots(coeffs, P.polyroots(coeffs))
    if np.any(np.abs(roots.imag) > root_imag_tol * (1 + np.abs(roots))):
        raise RuntimeError(
            f"Could not isolate real branch points in {name} at z={z}: {roots}"
        )
    roots = np.sort(roots.real)

    inner = roots[np.abs(roots) < 1]
    outer = list(roots[np.abs(roots) >= 1])
    if len(inner) != 2:
        raise RuntimeError(
            f"Expected two branch points in {name} inside the unit disk at z={z}, "
            f"found {len(inner)}: {roots}"
        )

    first, second = inner
    if degree == 3:
        outer.append(np.inf)

    mid = (first + second) / 2
    tau = [0 if np.isinf(r) else 1 / (r - mid) for r in outer]
    third, fourth = (outer[i] for i in np.argsort(tau)[::-1])
    return np.array([first, second, third, fourth])


def y_branches(curve: CurveData, x) -> Tuple[np.ndarray, np.ndarray]:
    """The two roots Y0, Y1 of K(x, y) = 0 in y, ordered with |Y0| ≤ |Y1|.

    If a(x) vanishes the second root is infinite.
    """
    k = curve.kernel
    return _quadratic_roots(
        P.polyval(x, k.a), P.polyval(x, k.b), P.polyval(x, k.c)
    )


def x_branches(curve: CurveData, y) -> Tuple[np.ndarray, np.ndarray]:
    """The two roots X0, X1 of K(x, y) = 0 in x, ordered with |X0| ≤ |X1|."""
    k = curve.kernel
    return _quadratic_roots(
        P.polyval(y, k.at), P.polyval(y, k.bt), P.polyval(y, k.ct)
    )


def _quadratic_roots(a, b, c):
    a, b, c = (np.asarray(v, dtype=complex) for v in (a, b, c))
    with np.errstate(all="ignore"):
        sqrt_disc = np.sqrt(b**2 - 4 * a * c)
        sign = np.where((np.conj(b) * sqrt_disc).real >= 0, 1, -1)
        q = -(b + sign * sqrt_disc) / 2
        r0 = c / q
        r1 = np.where(a == 0, np.inf + 0j, q / a)
    swap = np.abs(r0) > np.abs(r1)
    return np.where(swap, r1, r0), np.where(swap, r0, r1)


def x_of_y1(curve: CurveData) -> float:
    """The double root X(y1) = -b̃(y1) / 2ã(y1) of the kernel at y = y1.

    If ã(y1) vanishes the double root lies at infinity and ``np.inf`` is
    returned.
    """
    k = curve.kernel
    return _double_root(curve.y_branch[0], k.at, k.bt)


def y_of_x1(curve: CurveData) -> float:
    """The double root Y(x1) = -b(x1) / 2a(x1) of the kernel at x = x1.

    If a(x1) vanishes the double root lies at infinity and ``np.inf`` is
    returned.
    """
    k = curve.kernel
    return _double_root(curve.x_branch[0], k.a, k.b)


def _double_root(branch_point, lead, middle) -> float:
    lead_value = P.polyval(branch_point, lead)
    if abs(lead_value) <= _degenerate_tol * np.max(np.abs(lead)):
        return np.inf
    return float(-P.polyval(branch_point, middle) / (2 * lead_value))
