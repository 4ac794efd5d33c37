"""
Boundary functions r_x and r_y on the domain Δ = Δ_x ∪ Δ_y and their
meromorphic continuation by the ω₃-shift relations

    r_y(ω + ω₃) = r_y(ω) + f_y(ω),    r_x(ω - ω₃) = r_x(ω) + f_x(ω).
"""

import logging
from typing import Callable, List, Tuple

import numpy as np
from numpy.polynomial import polynomial as P

from qwalk.continuation.poles import f_x, f_y
from qwalk.elliptic.uniformization import Uniformization
from qwalk.walk.oracle import CountTable, boundary_gf

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)


class DeltaValues:
    """Values of r_x and r_y on Δ from the enumerated counts.

    On Δ_x, r_x(ω) = K(x, 0) Q(x, 0) with x = x(ω); on Δ_y,
    r_y(ω) = K(0, y) Q(0, y). The other function follows from the kernel
    equation on the curve, r_x + r_y = K(0, 0) Q(0, 0) + x y.

    Args:
        U: The uniformization.
        table: The count table used to evaluate the truncated series.
    """

    def __init__(self, U: Uniformization, table: CountTable):
        self.U = U
        self.table = table
        self.k00 = U.z * U.steps.weight(-1, -1)
        self.k00q00 = self.k00 * boundary_gf(table, "origin", 0, U.z)

    def _base_x(self, omega):
        x = self.U.x(omega)
        kx0 = P.polyval(x, self.U.curve.kernel.c)
        return kx0 * boundary_gf(self.table, "x-axis", x, self.U.z)

    def _base_y(self, omega):
        y = self.U.y(omega)
        k0y = P.polyval(y, self.U.curve.kernel.ct)
        return k0y * boundary_gf(self.table, "y-axis", y, self.U.z)

    def _complement(self, omega):
        return self.k00q00 + self.U.x(omega) * self.U.y(omega)

    def r_x(self, omega) -> complex:
        omega = complex(omega)
        if self.U.in_delta_x(omega):
            return complex(self._base_x(omega))
        if self.U.in_delta_y(omega):
            return complex(self._complement(omega) - self._base_y(omega))
        raise ValueError(f"ω = {omega} does not lie in Δ")

    def r_y(self, omega) -> complex:
        omega = complex(omega)
        if self.U.in_delta_y(omega):
            return complex(self._base_y(omega))
        if self.U.in_delta_x(omega):
            return complex(self._complement(omega) - self._base_x(omega))
        raise ValueError(f"ω = {omega} does not lie in Δ")


def _margin(U: Uniformization, omega: complex) -> float:
    margins = []
    if U.in_delta_x(omega):
        margins.append(1 - abs(complex(U.x(omega))))
    if U.in_delta_y(omega):
        margins.append(1 - abs(complex(U.y(omega))))
    return max(margins, default=-np.inf)


def delta_representatives(U: Uniformization, omega: complex) -> List[Tuple[int, float]]:
    """Shifts n with ω - nω₃ in Δ, ordered by decreasing margin to |x|, |y| = 1."""
    omega = complex(omega)
    centre = U.w2 / 2 + U.w3 / 4
    n_mid = int(round((omega.real - centre) / U.w3))
    span = int(np.ceil(U.w2 / U.w3)) + 2

    options = []
    for n in range(n_mid - span, n_mid + span + 1):
        margin = _margin(U, omega - n * U.w3)
        if margin > 0:
            options.append((n, margin))

    options.sort(key=lambda o: -o[1])
    return options


def _shift_sum(func, omega0: complex, w3: float, indices) -> complex:
    values = func(np.array([omega0 + t * w3 for t in indices], dtype=complex))
    return complex(np.sum(values)) if len(indices) else 0j


def continue_r_y(
    U: Uniformization, omega: complex, base: Callable[[complex], complex]
) -> complex:
    """Continue r_y from Δ to ω.

    With ω = ω₀ + nω₃ and ω₀ ∈ Δ, r_y(ω) = r_y(ω₀) + Σ_{t<n} f_y(ω₀ + tω₃) for
    n ≥ 0 and r_y(ω₀) - Σ_{1≤t≤|n|} f_y(ω₀ - tω₃) for n < 0. If the path meets
    a pole of f_y, another representative ω₀ is tried.

    Args:
        U: The uniformization.
        omega: The evaluation point.
        base: Function returning r_y on Δ.

    Returns:
        The continued value of r_y.
    """
    omega = complex(omega)
    for n, _ in delta_representatives(U, omega):
        omega0 = omega - n * U.w3
        if n >= 0:
            correction = _shift_sum(lambda w: f_y(U, w), omega0, U.w3, range(n))
        else:
            correction = -_shift_sum(
                lambda w: f_y(U, w), omega0, U.w3, range(-1, n - 1, -1)
            )
        if np.isfinite(correction):
            return base(omega0) + correction

    raise RuntimeError(f"Continuation of r_y to ω = {omega} meets a pole on every path")


def continue_r_x(
    U: Uniformization, omega: complex, base: Callable[[complex], complex]
) -> complex:
    """Continue r_x from Δ to ω.

    With ω = ω₀ - mω₃ and ω₀ ∈ Δ, r_x(ω) = r_x(ω₀) + Σ_{t<m} f_x(ω₀ - tω₃) for
    m ≥ 0 and r_x(ω₀) - Σ_{1≤t≤|m|} f_x(ω₀ + tω₃) for m < 0.
    """
    omega = complex(omega)
    for n, _ in delta_representatives(U, omega):
        omega0 = omega - n * U.w3
        m = -n
        if m >= 0:
            correction = _shift_sum(
                lambda w: f_x(U, w), omega0, U.w3, range(0, -m, -1)
            )
        else:
            correction = -_shift_sum(lambda w: f_x(U, w), omega0, U.w3, range(1, -m + 1))
        if np.isfinite(correction):
            return base(omega0) + correction

    raise RuntimeError(f"Continuation of r_x to ω = {omega} meets a pole on every path")


def r_y_continued(U: Uniformization, table: CountTable, omega: complex) -> complex:
    """r_y at any ω, continued from the enumerated values on Δ."""
    return continue_r_y(U, omega, DeltaValues(U, table).r_y)


def r_x_continued(U: Uniformization, table: CountTable, omega: complex) -> complex:
    """r_x at any ω, continued from the enumerated values on Δ."""
    return continue_r_x(U, omega, DeltaValues(U, table).r_x)
