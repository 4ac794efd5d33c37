"""
Closed forms for Kreweras walks S = {W, S, NE}.

r_y is elliptic with periods (ω₁, 2ω₂) for this model, so the boundary
functions can be written with the Weierstrass functions ℘₁₂, ζ₁₂ of the doubled
lattice, and the doubled-lattice data follow algebraically from the invariants
of (ω₁, ω₂).
"""

import logging
import math
from typing import Dict, Tuple

import numpy as np
from monty.json import MSONable

from qwalk.elliptic.curve import curve_data
from qwalk.elliptic.uniformization import Uniformization
from qwalk.elliptic.weierstrass import Lattice, wp, wp_prime, zeta
from qwalk.walk.stepset import StepSet, parse_stepset

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

kreweras_steps = parse_stepset("W,S,NE")

_w_tol = 1e-14
_w_max_iter = 100000


def solve_W(z: float) -> float:
    """The power series root of W = z(2 + W³), by fixed-point iteration from 2z."""
    if not 0 < z < 1 / 3:
        raise ValueError(f"z must lie in (0, 1/3), got {z}")

    w = 2 * z
    for _ in range(_w_max_iter):
        w_new = z * (2 + w**3)
        if abs(w_new - w) < _w_tol:
            return w_new
        w = w_new
    raise RuntimeError(f"Fixed-point iteration for W did not converge at z = {z}")


def q00_closed(z: float) -> float:
    """Q(0, 0) = (W - W⁴/4) / 2z."""
    w = solve_W(z)
    return (w - w**4 / 4) / (2 * z)


def qx0_closed(z: float, x):
    """Q(x, 0) = Q(0, x) with the principal square root.

    Q(x, 0) = (1/zx)(1/2z - 1/x - (1/W - 1/x)√(1 - xW²)); the value at x = 0 is
    Q(0, 0).
    """
    w = solve_W(z)
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=complex)

    with np.errstate(all="ignore"):
        root = np.sqrt(1 - x * w**2)
        value = (1 / (2 * z) - 1 / x - (1 / w - 1 / x) * root) / (z * x)
    value = np.where(x == 0, q00_closed(z), value)
    return complex(value) if scalar else value


def kreweras_excursions(n: int) -> int:
    """Number of Kreweras excursions of length 3n: 4ⁿ (3n)! / ((n+1)(2n+1)! n!)."""
    return 4**n * math.comb(3 * n, n) // ((n + 1) * (2 * n + 1))


def invariants(z: float) -> Tuple[float, float]:
    """g₂, g₃ of the lattice (ω₁, ω₂) for Kreweras walks.

    With ℘ = d₃x + d₂/3 the invariants are g₂ = 4d₂²/3 - 4d₁d₃ and
    g₃ = -8d₂³/27 + 4d₁d₂d₃/3 - 4d₀d₃².
    """
    d0, d1, d2, d3 = z**2, -2 * z, 1.0, -4 * z**2
    g2 = 4 * d2**2 / 3 - 4 * d1 * d3
    g3 = -8 * d2**3 / 27 + 4 * d1 * d2 * d3 / 3 - 4 * d0 * d3**2
    return g2, g3


def cubic_roots(g2: float, g3: float) -> Tuple[float, float, float]:
    """Roots (r, r̃, r̂) of 4X³ - g₂X + g₃ = 0 by the trigonometric method.

    r is the largest root, which is the power series root with r(0) = 2/3;
    r̃ < r̂ are the two Puiseux series roots.
    """
    p = -g2 / 4
    q = g3 / 4
    if 4 * p**3 + 27 * q**2 >= 0:
        raise RuntimeError("Cubic 4X³ - g₂X + g₃ does not have three real roots")

    amplitude = 2 * math.sqrt(-p / 3)
    angle = math.acos(3 * q / (2 * p) * math.sqrt(-3 / p)) / 3
    roots = sorted(amplitude * math.cos(angle - 2 * math.pi * k / 3) for k in range(3))
    return roots[2], roots[0], roots[1]


def r_from_W(z: float) -> float:
    """r = 2/3 - 4z²(W + W⁴/4)."""
    w = solve_W(z)
    return 2 / 3 - 4 * z**2 * (w + w**4 / 4)


def doubled_lattice_data(z: float) -> Tuple[float, float, float]:
    """e₂, g₂ and g₃ of the doubled lattice (ω₁, 2ω₂).

    e₂ = ℘₁₂(ω₂) = r/2, g₂ = 15r²/4 - g₂/4 and g₃ = 11g₃/32 - 7r g₂/32.
    """
    g2, g3 = invariants(z)
    r = cubic_roots(g2, g3)[0]
    return r / 2, 15 * r**2 / 4 - g2 / 4, 11 * g3 / 32 - 7 * r * g2 / 32


def wp12_from_wp(z: float, wp_value, sign: int = 1):
    """℘₁₂(ω) from ℘(ω).

    2℘₁₂ = ℘ + e₂ ± √((℘ - e₂)² + g₂¹² - 12e₂²); the sign depends on the half
    of the doubled period cell containing ω.
    """
    e2, g2_12, _ = doubled_lattice_data(z)
    wp_value = np.asarray(wp_value, dtype=complex)
    root = np.sqrt((wp_value - e2) ** 2 + g2_12 - 12 * e2**2)
    return (wp_value + e2 + sign * root) / 2


def branch_x1(z: float) -> float:
    return float(curve_data(kreweras_steps, z).x_branch[0])


def x_half_shift(z: float, x):
    """x(ω + ω₂/2) = √x₁ (√x₁ x + 1)/(x - x₁), an involution in x."""
    x1 = branch_x1(z)
    s = math.sqrt(x1)
    x = np.asarray(x, dtype=complex)
    with np.errstate(all="ignore"):
        value = s * (s * x + 1) / (x - x1)
    return np.where(np.isinf(x), x1, np.where(x == x1, np.inf, value))


class KrewerasConstants(MSONable):
    """Algebraic constants of the Kreweras closed forms at fixed z.

    Args:
        z: The step weight.
        W: Root of W = z(2 + W³).
        r: The power series root of 4X³ - g₂X + g₃.
        r_tilde: The smallest root.
        r_hat: The middle root.
        e2_12: ℘₁₂(ω₂).
        g2_12: g₂ of the doubled lattice.
        g3_12: g₃ of the doubled lattice.
        x1: The smallest branch point of the x discriminant.
        B0: Numerator constant of ℘₁₂(ω + ω₂/2).
        B1: Coefficient of x in the same numerator.
        sqrt_a0: The square root of A₀ multiplying √(1 - xW²).
        C1: (B₀ + B₁x₁ - √A₀)².
    """

    def __init__(
        self, z, W, r, r_tilde, r_hat, e2_12, g2_12, g3_12, x1, B0, B1, sqrt_a0, C1
    ):
        self.z = z
        self.W = W
        self.r = r
        self.r_tilde = r_tilde
        self.r_hat = r_hat
        self.e2_12 = e2_12
        self.g2_12 = g2_12
        self.g3_12 = g3_12
        self.x1 = x1
        self.B0 = B0
        self.B1 = B1
        self.sqrt_a0 = sqrt_a0
        self.C1 = C1

    @property
    def A0(self) -> float:
        return self.sqrt_a0**2

    def wp12_half_shift(self, x, sqrt_sign: int = 1):
        """℘₁₂(ω + ω₂/2) = (B₀ + B₁x + √A₀ √(1 - xW²)) / 12(x - x₁)."""
        x = np.asarray(x, dtype=complex)
        root = sqrt_sign * np.sqrt(1 - x * self.W**2)
        with np.errstate(all="ignore"):
            return (self.B0 + self.B1 * x + self.sqrt_a0 * root) / (12 * (x - self.x1))

    def reciprocal_half(self, x, sqrt_sign: int = 1):
        """1 / (℘₁₂(ω + ω₂/2) - ℘₁₂(ω₂/2)) in terms of x = x(ω)."""
        x = np.asarray(x, dtype=complex)
        root = sqrt_sign * np.sqrt(1 - x * self.W**2)
        return (
            12
            / (self.A0 * self.W**2)
            * (self.B0 + self.B1 * self.x1 - self.sqrt_a0 * root)
        )

    def reciprocal_sixth(self, x, sqrt_sign: int = 1):
        """1 / (℘₁₂(ω + ω₂/2) - ℘₁₂(ω₂/6)) in terms of x = x(ω)."""
        x = np.asarray(x, dtype=complex)
        root = sqrt_sign * np.sqrt(1 - x * self.W**2)
        x1, sa = self.x1, self.sqrt_a0
        with np.errstate(all="ignore"):
            return (
                12
                * x1
                / (self.C1 * x)
                * (sa * x1 + (self.B0 - sa + self.B1 * x1) * x - x1 * sa * root)
            )


def kreweras_constants(z: float) -> KrewerasConstants:
    """Evaluate the Kreweras constants at z.

    B₁ = 3(r - 2r̃), since ℘₁₂(ω₂/2) = e + √((e - e′)(e - e″)) with e = ℘₁₂(ω₂) = r/2
    reduces to (r - 2r̃)/4. √A₀ is the positive root of (B₀ + B₁x₁)²/(1 - x₁W²).
    At x = 0 the two branches of √(1 - xW²) give ℘₁₂(5ω₂/6) and
    ℘₁₂(ω₂/6) = (√A₀ - B₀)/(12x₁); the principal branch belongs to ω near ω₂/3.
    """
    w = solve_W(z)
    g2, g3 = invariants(z)
    r, r_tilde, r_hat = cubic_roots(g2, g3)
    e2_12, g2_12, g3_12 = doubled_lattice_data(z)
    x1 = branch_x1(z)

    b0 = -(2 * x1 + 24 * z**2 * math.sqrt(x1) + 3 * r * x1)
    b1 = 3 * (r - 2 * r_tilde)
    sqrt_a0 = abs(b0 + b1 * x1) / math.sqrt(1 - x1 * w**2)
    c1 = (b0 + b1 * x1 - sqrt_a0) ** 2

    return KrewerasConstants(
        z, w, r, r_tilde, r_hat, e2_12, g2_12, g3_12, x1, b0, b1, sqrt_a0, c1
    )


def doubled_lattice(U: Uniformization) -> Lattice:
    return U.lattice.scaled(1, 2)


def ry_constant(U: Uniformization) -> complex:
    """The constant c fixed by r_y(2ω₂/3) = 0."""
    lat = doubled_lattice(U)
    w2, z = U.w2, U.z
    return (zeta(lat, w2 / 3) - zeta(lat, 4 * w2 / 3)) / (2 * z) + (
        zeta(lat, w2) - zeta(lat, 2 * w2 / 3)
    ) / z


def ry_zeta(U: Uniformization, omega):
    """r_y(ω) as a combination of four ζ₁₂ functions.

    r_y(ω) = c + ζ₁₂(ω + 2ω₂/3)/2z - ζ₁₂(ω + ω₂/3)/z + ζ₁₂(ω)/z - ζ₁₂(ω - ω₂/3)/2z.
    """
    lat = doubled_lattice(U)
    w2, z = U.w2, U.z
    omega = np.asarray(omega, dtype=complex)
    value = (
        zeta(lat, omega + 2 * w2 / 3) / (2 * z)
        - zeta(lat, omega + w2 / 3) / z
        + zeta(lat, omega) / z
        - zeta(lat, omega - w2 / 3) / (2 * z)
    )
    return ry_constant(U) + value


def ry_half_shift(U: Uniformization, omega):
    """r_y(ω + ω₃/2 - ω₂/2) through ℘₁₂(ω) alone.

    c + ζ₁₂(ω₂/2)/z - 2ζ₁₂(ω₂/6)/z - (℘₁₂′(ω₂/2)/2z)/(℘₁₂(ω) - ℘₁₂(ω₂/2))
    + (℘₁₂′(ω₂/6)/z)/(℘₁₂(ω) - ℘₁₂(ω₂/6)).
    """
    lat = doubled_lattice(U)
    w2, z = U.w2, U.z
    half, sixth = w2 / 2, w2 / 6
    p = wp(lat, omega)
    with np.errstate(all="ignore"):
        return (
            ry_constant(U)
            + zeta(lat, half) / z
            - 2 * zeta(lat, sixth) / z
            - wp_prime(lat, half) / (2 * z) / (p - wp(lat, half))
            + wp_prime(lat, sixth) / z / (p - wp(lat, sixth))
        )


def q00_from_wp12(U: Uniformization) -> complex:
    """Q(0,0) = (1/4z³)[℘₁₂(ω₂/3) - ℘₁₂(4ω₂/3) + 2(℘₁₂(ω₂) - ℘₁₂(2ω₂/3))]."""
    lat = doubled_lattice(U)
    w2, z = U.w2, U.z
    value = (
        wp(lat, w2 / 3)
        - wp(lat, 4 * w2 / 3)
        + 2 * (wp(lat, w2) - wp(lat, 2 * w2 / 3))
    )
    return complex(value) / (4 * z**3)


def wp12_thirds(z: float) -> Tuple[float, float]:
    """℘₁₂(ω₂/3) and ℘₁₂(2ω₂/3) = ℘₁₂(4ω₂/3) from r."""
    r = cubic_roots(*invariants(z))[0]
    root = math.sqrt(-2 / 9 - r / 3 + r**2 + 8 * z**3)
    return (1 / 3 + r / 2 + root) / 2, (1 / 3 + r / 2 - root) / 2


def q00_from_r(z: float) -> float:
    """Q(0,0) = (1/4z³)(-1/3 + r/2 + 2√(-2/9 - r/3 + r² + 8z³))."""
    r = cubic_roots(*invariants(z))[0]
    root = math.sqrt(-2 / 9 - r / 3 + r**2 + 8 * z**3)
    return (-1 / 3 + r / 2 + 2 * root) / (4 * z**3)


def special_values_12(U: Uniformization) -> Dict[str, complex]:
    """℘₁₂ and ℘₁₂′ at ω₂/2 and ω₂/6, directly and from the constants."""
    lat = doubled_lattice(U)
    consts = kreweras_constants(U.z)
    w2 = U.w2
    return {
        "wp12_half": complex(wp(lat, w2 / 2)),
        "wp12_sixth": complex(wp(lat, w2 / 6)),
        "wp12_prime_half": complex(wp_prime(lat, w2 / 2)),
        "wp12_prime_sixth": complex(wp_prime(lat, w2 / 6)),
        "wp12_half_closed": consts.B1 / 12,
        "wp12_sixth_closed": (consts.sqrt_a0 - consts.B0) / (12 * consts.x1),
    }


def _expected_constants(z: float) -> Dict[str, float]:
    w = solve_W(z)
    return {"alpha": 1 / (2 * z), "beta": -1.0, "gamma": -1 / w, "delta": 1.0}


def defining_constants(U: Uniformization) -> Dict[str, complex]:
    """α, β, γ, δ from their defining expressions in ζ₁₂, ℘₁₂′ and the constants."""
    lat = doubled_lattice(U)
    consts = kreweras_constants(U.z)
    z, w2 = U.z, U.w2
    x1, sa, w = consts.x1, consts.sqrt_a0, consts.W
    b0, b1, c1 = consts.B0, consts.B1, consts.C1

    wpp_half = complex(wp_prime(lat, w2 / 2))
    wpp_sixth = complex(wp_prime(lat, w2 / 6))

    alpha = (
        ry_constant(U)
        + zeta(lat, w2 / 2) / z
        - 2 * zeta(lat, w2 / 6) / z
        - 6 * wpp_half * (b0 + b1 * x1) / (z * consts.A0 * w**2)
        + 12 * x1 * wpp_sixth * (b0 - sa + b1 * x1) / (c1 * z)
    )
    beta = 12 * x1**2 * sa * wpp_sixth / (c1 * z)
    gamma = 6 * wpp_half / (z * sa * w**2)
    delta = -12 * x1**2 * sa * wpp_sixth / (c1 * z)
    return {
        "alpha": complex(alpha),
        "beta": complex(beta),
        "gamma": complex(gamma),
        "delta": complex(delta),
    }


def identified_constants(
    U: Uniformization, radius_fraction: float = 0.1, n_points: int = 8
) -> Dict[str, complex]:
    """α, β, γ, δ identified from the two branches of r_y.

    Near the zero ω₂/3 of x, r_y(ω + ω₃/2) = α + β/x + (γ + δ/x)√(1 - xW²) and
    r_y(ω + ω₃/2 + ω₂) takes the other sign of the square root. Half the sum
    and half the difference are fitted to α + β/x and (γ + δ/x)√(1 - xW²).
    """
    w = solve_W(U.z)
    theta = 2 * np.pi * (np.arange(n_points) + 0.5) / n_points
    omega = U.w2 / 3 + radius_fraction * U.w2 / 3 * np.exp(1j * theta)
    nu = omega + U.w3 / 2

    x = U.x(omega)
    first = ry_zeta(U, nu)
    second = ry_zeta(U, nu + U.w2)
    root = np.sqrt(1 - x * w**2)

    basis = np.stack([np.ones_like(x), 1 / x], axis=1)
    (alpha, beta), *_ = np.linalg.lstsq(basis, (first + second) / 2, rcond=None)
    (gamma, delta), *_ = np.linalg.lstsq(
        basis, (first - second) / (2 * root), rcond=None
    )
    return {
        "alpha": complex(alpha),
        "beta": complex(beta),
        "gamma": complex(gamma),
        "delta": complex(delta),
    }


def constants_check(U: Uniformization) -> Dict[str, Dict[str, float]]:
    """Residuals of α, β, γ, δ against 1/2z, -1, -1/W and 1.

    Returns:
        Residuals of the defining expressions and of the branch identification.
    """
    expected = _expected_constants(U.z)
    residuals = {}
    for name, values in (
        ("defining", defining_constants(U)),
        ("identified", identified_constants(U)),
    ):
        residuals[name] = {k: abs(values[k] - expected[k]) for k in expected}
    logger.debug(f"Kreweras constants residuals: {residuals}")
    return residuals


def assembled_ry(z: float, x, constants: Dict[str, complex] = None):
    """α + β/x + (γ + δ/x)√(1 - xW²), which equals zx Q(x, 0)."""
    w = solve_W(z)
    c = constants or _expected_constants(z)
    x = np.asarray(x, dtype=complex)
    root = np.sqrt(1 - x * w**2)
    return c["alpha"] + c["beta"] / x + (c["gamma"] + c["delta"] / x) * root


def qx0_from_constants(z: float, x, constants: Dict[str, complex] = None):
    """Q(x, 0) assembled from α, β, γ, δ."""
    x = np.asarray(x, dtype=complex)
    return assembled_ry(z, x, constants) / (z * x)


def kreweras_uniformization(z: float) -> Uniformization:
    from qwalk.elliptic.uniformization import uniformize

    return uniformize(curve_data(kreweras_steps, z))


def is_kreweras(steps: StepSet) -> bool:
    return steps == kreweras_steps
