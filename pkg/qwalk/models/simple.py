"""
The simple walk S = {E, W, N, S}: explicit poles of f_y and r_y, and the
decomposition of r_y with the quasi-elliptic function φ.
"""

import logging
from typing import Callable, List

import numpy as np

from qwalk.continuation.poles import PrincipalPart
from qwalk.elliptic.uniformization import Uniformization
from qwalk.elliptic.weierstrass import quasi_phi, quasi_phi_prime, wp, zeta
from qwalk.walk.stepset import parse_stepset

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

simple_steps = parse_stepset("E,W,N,S")


def fy_closed(U: Uniformization, omega):
    """f_y(ω) = x′(ω)/2z."""
    return U.x_prime(omega) / (2 * U.z)


def expected_fy_poles(U: Uniformization) -> List[PrincipalPart]:
    """Double poles of f_y at ω₂/8 and 7ω₂/8 with coefficients ±1/4z²."""
    c = 1 / (4 * U.z**2)
    return [
        PrincipalPart(U.w2 / 8, {2: c}),
        PrincipalPart(7 * U.w2 / 8, {2: -c}),
    ]


def ledger_poles(U: Uniformization, n_range=range(-4, 9)) -> List[complex]:
    """Poles ω₂/8 + nω₂/4 of r_y on the real axis, n outside {1, 2, 3, 4}."""
    return [U.w2 / 8 + n * U.w2 / 4 for n in n_range if n not in (1, 2, 3, 4)]


def _phi_parts(U: Uniformization):
    # (location, sign of the double pole of φ(f_y(ω) + f_y(ω + ω₂/2)), extra)
    w2 = U.w2
    return [(w2 / 8, -1, -1.0), (3 * w2 / 8, 1, 0.0), (5 * w2 / 8, -1, 0.0), (7 * w2 / 8, 1, 0.0)]


def decomposition_R(U: Uniformization, omega):
    """The elliptic function R(ω) with the principal parts of
    r_y(ω) - φ(ω)[f_y(ω) + f_y(ω + ω₂/2)] in the cell, up to a constant.
    """
    c = 1 / (4 * U.z**2)
    lat = U.lattice
    omega = np.asarray(omega, dtype=complex)
    total = np.zeros_like(omega)
    for location, sign, extra in _phi_parts(U):
        phi = complex(quasi_phi(lat, location))
        phi_prime = complex(quasi_phi_prime(lat, location))
        total = total + c * (
            (sign * phi + extra) * wp(lat, omega - location)
            + sign * phi_prime * zeta(lat, omega - location)
        )
    return total


def phi_decomposition(U: Uniformization, r_y: Callable, omega):
    """r_y(ω) - φ(ω)[f_y(ω) + f_y(ω + ω₂/2)], which is (ω₁, ω₂)-elliptic."""
    omega = np.asarray(omega, dtype=complex)
    orbit = fy_closed(U, omega) + fy_closed(U, omega + U.w2 / 2)
    values = np.array([r_y(w) for w in np.atleast_1d(omega)]).reshape(omega.shape)
    return values - quasi_phi(U.lattice, omega) * orbit


def srw_phi_decomposition(U: Uniformization, r_y: Callable, omega):
    """Discrepancy between the φ decomposition of r_y and R(ω).

    The discrepancy is the additive constant left undetermined by the poles, so
    it does not depend on ω.

    Args:
        U: The uniformization of the simple walk.
        r_y: Function returning r_y at a point, e.g. from the series or from
            the continuation.
        omega: The evaluation points.

    Returns:
        The discrepancies.
    """
    return phi_decomposition(U, r_y, omega) - decomposition_R(U, omega)
