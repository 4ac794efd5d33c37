"""
Laurent and Taylor coefficients by trapezoidal contour integration on circles.
"""

from typing import Callable, Dict, Iterable

import numpy as np

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"


def circle_values(f: Callable, centre: complex, radius: float, n_points: int = 64):
    theta = 2 * np.pi * np.arange(n_points) / n_points
    return np.asarray(f(centre + radius * np.exp(1j * theta)), dtype=complex)


def laurent_coefficients(
    f: Callable,
    centre: complex,
    radius: float,
    n_points: int = 64,
    orders: Iterable[int] = (1, 2, 3, 4, 5, 6),
) -> Dict[int, complex]:
    """Coefficients g₋ₘ of the principal part of f at centre.

    g₋ₘ = (1/N) Σ f(c + ρ e^(iθ_j)) ρ^m e^(imθ_j), the inverse FFT of the samples,
    which is exact up to aliasing when f has no other singularity inside the
    circle.

    Args:
        f: Vectorised function.
        centre: The expansion point.
        radius: The circle radius ρ.
        n_points: The number of trapezoid nodes N.
        orders: The orders m to extract.

    Returns:
        Mapping of order m to the coefficient of (ω - c)^-m.
    """
    coeffs = np.fft.ifft(circle_values(f, centre, radius, n_points))
    return {m: complex(coeffs[m] * radius**m) for m in orders}


def taylor_coefficients(
    f: Callable,
    centre: complex,
    radius: float,
    n_points: int = 64,
    max_order: int = 4,
) -> np.ndarray:
    """Taylor coefficients a_0 ... a_max_order of f at centre."""
    coeffs = np.fft.fft(circle_values(f, centre, radius, n_points)) / n_points
    return coeffs[: max_order + 1] / radius ** np.arange(max_order + 1)


def circle_scale(f: Callable, centre: complex, radius: float, n_points: int = 64):
    """Largest |f| on the circle, used to judge negligible coefficients."""
    values = circle_values(f, centre, radius, n_points)
    return float(np.max(np.abs(values)))
