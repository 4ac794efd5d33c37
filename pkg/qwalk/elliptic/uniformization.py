"""
Periods of the kernel curve and its uniformization by the Weierstrass ℘
function.
"""

import logging
from typing import Dict, List, Tuple

import numpy as np
from monty.json import MSONable
from numpy.polynomial import polynomial as P
from scipy.special import elliprf

from qwalk.constants import delta_margin, large_val
from qwalk.elliptic.curve import CurveData, x_of_y1
from qwalk.elliptic.weierstrass import (
    Lattice,
    wp,
    wp_invert_all,
    wp_prime,
)

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)


class Periods(MSONable):
    """The periods of the kernel curve.

    Args:
        w1: The imaginary period, with positive imaginary part.
        w2: The real period.
        w3: The shift between the x and y uniformizations, 0 < w3 < w2.
    """

    def __init__(self, w1: complex, w2: float, w3: float):
        self.w1 = complex(w1)
        self.w2 = float(w2)
        self.w3 = float(w3)

    @property
    def ratio(self) -> float:
        return self.w3 / self.w2


def periods(curve: CurveData) -> Periods:
    """Compute the periods of the kernel curve.

    w1 = i ∫_{x1}^{x2} dx / √(-d(x)) and w2 = ∫_{x2}^{x3} dx / √d(x), where the
    second path runs through infinity if needed. w3 = ∫_{X(y1)}^{x1} dx / √d(x).

    With p = (x1 + x2)/2 the substitution τ = 1/(x - p) turns d into a quartic
    with four finite real roots τ(x1) < τ(x4) < τ(x3) < τ(x2), a root at infinity
    becoming τ = 0. The integrals are then evaluated in closed form with
    Carlson's symmetric integral R_F, using only differences of roots.

    Args:
        curve: The curve data with ordered branch points.

    Returns:
        The periods.
    """
    if curve.x_branch is None:
        raise ValueError("Branch points must be computed before the periods")

    x1, x2, x3, x4 = curve.x_branch
    mid = (x1 + x2) / 2

    # ascending τ: e1 = τ(x1), e2 = τ(x4), e3 = τ(x3), e4 = τ(x2)
    roots = (x1, x4, x3, x2)

    def gap(i, j):
        return _tau_gap(roots[j], roots[i], mid)

    scale = np.sqrt(abs(_value_at(curve.d, curve.x_branch, mid)))
    e31_e42 = gap(0, 2) * gap(1, 3)

    w2 = 2 * elliprf(0, gap(1, 2) * gap(0, 3), e31_e42) / scale
    w1 = 2j * elliprf(0, gap(0, 1) * gap(2, 3), e31_e42) / scale

    # ∫ from e1 to τ(X(y1)) inside [e1, e2]
    x_shift = x_of_y1(curve)
    t1 = _tau_gap(x_shift, x1, mid)
    t2, t3, t4 = (_tau_gap(r, x_shift, mid) for r in (x4, x3, x2))
    if not (t1 > 0 and t2 >= 0):
        raise RuntimeError("X(y1) lies on the wrong side of x1 for the ω₃ path")

    w3 = (
        2
        * elliprf(
            t2 * gap(0, 2) * gap(0, 3) / t1,
            t3 * gap(0, 1) * gap(0, 3) / t1,
            t4 * gap(0, 1) * gap(0, 2) / t1,
        )
        / scale
    )

    logger.debug(f"Periods: ω₁ = {w1}, ω₂ = {w2}, ω₃ = {w3}")
    return Periods(w1, w2, w3)


def _tau_gap(xa, xb, mid):
    """τ(xa) - τ(xb) for τ = 1/(x - mid), without cancellation."""
    if np.isinf(xa) and np.isinf(xb):
        return 0.0
    if np.isinf(xa):
        return -1 / (xb - mid)
    if np.isinf(xb):
        return 1 / (xa - mid)
    return (xb - xa) / ((xa - mid) * (xb - mid))


def _value_at(coeffs, branch, x):
    """d(x) from the leading coefficient and the finite roots of d."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    finite = [r for r in branch if not np.isinf(r)]
    return coeffs[-1] * np.prod([x - r for r in finite])

class MobiusMap(MSONable):
    """A map x = (A℘ + B)/(C℘ + D) from ℘ values to a kernel variable.

    Args:
        A: The coefficient A.
        B: The coefficient B.
        C: The coefficient C.
        D: The coefficient D.
    """

    def __init__(self, A: float, B: float, C: float, D: float):
        self.A = A
        self.B = B
        self.C = C
        self.D = D

    @classmethod
    def from_discriminant(cls, d, root: float) -> "MobiusMap":
        """The map sending ℘ to the variable of the discriminant d.

        If the branch point is finite, ℘ = d″(r)/6 + d′(r)/(x - r); otherwise
        ℘ = d″(0)/6 + d‴(0) x / 6.
        """
        if np.isinf(root):
            return cls(1 / d[3], -(d[2] / 3) / d[3], 0.0, 1.0)

        d1 = P.polyval(root, P.polyder(d, 1))
        d2 = P.polyval(root, P.polyder(d, 2))
        return cls(root, d1 - root * d2 / 6, 1.0, -d2 / 6)

    def __call__(self, p):
        p = np.asarray(p, dtype=complex)
        with np.errstate(all="ignore"):
            value = (self.A * p + self.B) / (self.C * p + self.D)
            at_inf = self.A / self.C if self.C != 0 else np.inf
        return np.where(np.isinf(p), at_inf, value)

    def derivative(self, p, p_prime):
        """dx/dω given ℘ and ℘′."""
        p = np.asarray(p, dtype=complex)
        det = self.A * self.D - self.B * self.C
        with np.errstate(all="ignore"):
            value = det * p_prime / (self.C * p + self.D) ** 2
        at_pole = 0 if self.C != 0 else np.inf
        return np.where(np.isinf(p), at_pole, value)

    def inverse(self, x):
        """The ℘ value corresponding to x."""
        x = complex(x)
        if np.isinf(x):
            return -self.D / self.C if self.C != 0 else np.inf
        denom = self.A - self.C * x
        if denom == 0:
            return np.inf
        return (self.D * x - self.B) / denom


class Uniformization:
    """Parametrization of the kernel curve by x(ω) and y(ω).

    x(ω) = g_x⁻¹(℘(ω)) and y(ω) = g_y⁻¹(℘(ω - ω₃/2)) on the lattice (ω₁, ω₂).

    Args:
        curve: The curve data with ordered branch points.
        periods: The periods of the curve.
    """

    def __init__(self, curve: CurveData, periods: Periods):
        self.curve = curve
        self.periods = periods
        self.lattice = Lattice(periods.w1, periods.w2)
        self.gx = MobiusMap.from_discriminant(curve.d, curve.x_branch[3])
        self.gy = MobiusMap.from_discriminant(curve.dt, curve.y_branch[3])

    @property
    def steps(self):
        return self.curve.steps

    @property
    def z(self) -> float:
        return self.curve.z

    @property
    def w1(self) -> complex:
        return self.periods.w1

    @property
    def w2(self) -> float:
        return self.periods.w2

    @property
    def w3(self) -> float:
        return self.periods.w3

    @property
    def named_points(self) -> Dict[str, complex]:
        """Preimages of the branch points.

        ω_x4 = 0, ω_x1 = ω₂/2, ω_x3 = ω₁/2, ω_x2 = (ω₁ + ω₂)/2 and
        ω_yi = ω_xi + ω₃/2.
        """
        w1, w2, w3 = self.w1, self.w2, self.w3
        points = {
            "x1": w2 / 2,
            "x2": (w1 + w2) / 2,
            "x3": w1 / 2,
            "x4": 0j,
        }
        points.update({"y" + k[1]: v + w3 / 2 for k, v in list(points.items())})
        return {k: complex(v) for k, v in points.items()}

    def x(self, omega):
        return self.gx(wp(self.lattice, omega))

    def y(self, omega):
        return self.gy(wp(self.lattice, np.asarray(omega) - self.w3 / 2))

    def x_prime(self, omega):
        return self.gx.derivative(wp(self.lattice, omega), wp_prime(self.lattice, omega))

    def y_prime(self, omega):
        shifted = np.asarray(omega) - self.w3 / 2
        return self.gy.derivative(
            wp(self.lattice, shifted), wp_prime(self.lattice, shifted)
        )

    def xi_hat(self, omega):
        """The lift of ξ, fixing x: ω ↦ -ω + 2ω_x2."""
        return -np.asarray(omega) + 2 * self.named_points["x2"]

    def eta_hat(self, omega):
        """The lift of η, fixing y: ω ↦ -ω + 2ω_y2."""
        return -np.asarray(omega) + 2 * self.named_points["y2"]

    def in_delta_x(self, omega) -> np.ndarray:
        """Whether ω lies in Δ_x: |x(ω)| < 1 in the strip |Re ω - ω₂/2| < ω₂/2."""
        omega = np.asarray(omega, dtype=complex)
        strip = np.abs(omega.real - self.w2 / 2) < self.w2 / 2
        return strip & (np.abs(self.x(omega)) < 1 - delta_margin)

    def in_delta_y(self, omega) -> np.ndarray:
        """Whether ω lies in Δ_y: |y(ω)| < 1 in the strip centred on Re ω_y2."""
        omega = np.asarray(omega, dtype=complex)
        centre = self.w2 / 2 + self.w3 / 2
        strip = np.abs(omega.real - centre) < self.w2 / 2
        return strip & (np.abs(self.y(omega)) < 1 - delta_margin)

    def in_delta(self, omega) -> Dict[str, np.ndarray]:
        in_x = self.in_delta_x(omega)
        in_y = self.in_delta_y(omega)
        return {"x": in_x, "y": in_y, "any": in_x | in_y}

    def omega_of_x(self, x0) -> Tuple[complex, complex]:
        """Both preimages of x0 in the fundamental cell."""
        return wp_invert_all(self.lattice, self.gx.inverse(x0))

    def omega_of_y(self, y0) -> Tuple[complex, complex]:
        """Both preimages of y0, in the fundamental cell shifted by ω₃/2."""
        return tuple(
            complex(w + self.w3 / 2)
            for w in wp_invert_all(self.lattice, self.gy.inverse(y0))
        )

    def zeros_in_delta(self, variable: str) -> List[complex]:
        """Preimages of x = 0 in Δ_x (or of y = 0 in Δ_y).

        Candidates are translated by ω₂ so that they fall in the strip of the
        corresponding domain.
        """
        if variable == "x":
            candidates = self.omega_of_x(0)
            check = self.in_delta_x
        elif variable == "y":
            candidates = self.omega_of_y(0)
            check = self.in_delta_y
        else:
            raise ValueError(f"Unrecognised variable: {variable}")

        zeros = []
        for w in candidates:
            for shift in (-self.w2, 0, self.w2):
                if check(w + shift) and all(
                    not self.lattice.equivalent(w + shift, z) for z in zeros
                ):
                    zeros.append(complex(w + shift))

        if not zeros:
            raise RuntimeError(f"No zero of {variable} found in Δ_{variable}")
        return zeros

    def finite(self, values) -> np.ndarray:
        return np.abs(values) < large_val


def uniformize(curve: CurveData, curve_periods: Periods = None) -> Uniformization:
    """Build the uniformization of the kernel curve.

    Args:
        curve: The curve data with ordered branch points.
        curve_periods: Precomputed periods. Computed if not given.

    Returns:
        The uniformization.
    """
    if curve_periods is None:
        curve_periods = periods(curve)
    return Uniformization(curve, curve_periods)
