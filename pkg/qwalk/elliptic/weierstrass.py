"""
Weierstrass elliptic functions on a lattice with one real and one imaginary
period.

Values are computed from row sums of the lattice: the sum over one period is
performed in closed form with trigonometric functions, leaving a rapidly
converging sum over the other period. Arguments are first reduced into the
period cell centred on the origin and the quasi-periodicity of ζ is restored
afterwards.
"""

import logging
import math
from functools import cached_property
from typing import Dict, Iterable, Tuple

import numpy as np
from monty.json import MSONable

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

_decay_exponent = 37  # exp(-37) ~ 1e-16
_pole_tol = 1e-14
_aspect_limits = (1e-3, 1e3)


def cot_csc2(u) -> Tuple[np.ndarray, np.ndarray]:
    """Evaluate cot(u) and csc²(u) without overflow for large |Im u|.

    Args:
        u: Complex argument(s).

    Returns:
        The tuple (cot(u), csc²(u)).
    """
    u = np.asarray(u, dtype=complex)
    sign = np.where(u.imag >= 0, 1.0, -1.0)
    v = u * sign
    with np.errstate(all="ignore"):
        e = np.exp(2j * v)
        # 1 - exp(2iv) loses relative precision for small v
        one_minus_e = np.where(
            np.abs(v.imag) < 1, -2j * np.sin(v) * np.exp(1j * v), 1 - e
        )
        cot = -1j * sign * (1 + e) / one_minus_e
        csc2 = -4 * e / one_minus_e**2
    return cot, csc2


class Lattice(MSONable):
    """A period lattice spanned by w1 (imaginary) and w2 (real).

    Args:
        w1: The imaginary period, with positive imaginary part.
        w2: The real period, positive.
    """

    def __init__(self, w1: complex, w2: complex):
        w1 = complex(w1)
        w2 = complex(w2)

        if abs(w1) == 0 or abs(w2) == 0 or abs((w1 / w2).imag) < 1e-14:
            raise ValueError(f"Degenerate lattice periods: {w1}, {w2}")

        self.w1 = w1
        self.w2 = w2

        aspect = abs(w1) / abs(w2)
        if not _aspect_limits[0] <= aspect <= _aspect_limits[1]:
            logger.warning(
                f"Lattice aspect ratio |ω₁|/ω₂ = {aspect:.3g} is extreme, "
                "Weierstrass evaluations may lose accuracy"
            )

        # sum over the shorter period in closed form
        if abs(w1) <= abs(w2):
            self._wa, self._wb = w1, w2
        else:
            self._wa, self._wb = w2, w1

        self._q = np.pi / self._wa
        tau = self._wb / self._wa
        nrows = math.ceil(_decay_exponent / (2 * np.pi * abs(tau.imag)) + 0.5)
        self._rows = np.arange(-nrows, nrows + 1)

        shifts = self._q * self._rows[self._rows != 0] * self._wb
        self._csc2_sum = cot_csc2(shifts)[1].sum()

        self._basis = np.array([[w1.real, w2.real], [w1.imag, w2.imag]])

    def coords(self, w) -> Tuple[np.ndarray, np.ndarray]:
        """Real coordinates (a, b) such that w = a w1 + b w2."""
        w = np.asarray(w, dtype=complex)
        rhs = np.stack([w.real.ravel(), w.imag.ravel()])
        a, b = np.linalg.solve(self._basis, rhs)
        return a.reshape(w.shape), b.reshape(w.shape)

    def reduce(self, w) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Reduce w into the period cell centred on the origin.

        Returns:
            The tuple (w0, n1, n2) with w = w0 + n1 w1 + n2 w2.
        """
        w = np.asarray(w, dtype=complex)
        a, b = self.coords(w)
        n1 = np.round(a)
        n2 = np.round(b)
        return w - n1 * self.w1 - n2 * self.w2, n1, n2

    def to_cell(self, w) -> np.ndarray:
        """Reduce w into the fundamental cell [0, w2) + [0, w1)."""
        w = np.asarray(w, dtype=complex)
        a, b = self.coords(w)
        return w - np.floor(a) * self.w1 - np.floor(b) * self.w2

    def equivalent(self, w, v, tol: float = 1e-8) -> bool:
        """Whether w and v differ by a lattice vector, up to tol * |w2|."""
        return bool(abs(self.reduce(complex(w) - complex(v))[0]) < tol * abs(self.w2))

    def _row_arguments(self, w0):
        return self._q * (w0[..., None] + self._rows * self._wb)

    def _wp_reduced(self, w0):
        _, csc2 = cot_csc2(self._row_arguments(w0))
        return self._q**2 * (-1 / 3 - self._csc2_sum + csc2.sum(axis=-1))

    def _wp_prime_reduced(self, w0):
        cot, csc2 = cot_csc2(self._row_arguments(w0))
        return -2 * self._q**3 * (csc2 * cot).sum(axis=-1)

    def _zeta_reduced(self, w0):
        cot, _ = cot_csc2(self._row_arguments(w0))
        return self._q * cot.sum(axis=-1) + w0 * self._q**2 * (
            1 / 3 + self._csc2_sum
        )

    def _at_pole(self, w0):
        return np.abs(w0) < _pole_tol * abs(self._wa)

    @cached_property
    def eta1(self) -> complex:
        """ζ(w1 / 2), such that ζ(w + w1) = ζ(w) + 2 η1."""
        return complex(self._zeta_reduced(np.asarray([self.w1 / 2]))[0])

    @cached_property
    def eta2(self) -> complex:
        """ζ(w2 / 2), such that ζ(w + w2) = ζ(w) + 2 η2."""
        return complex(self._zeta_reduced(np.asarray([self.w2 / 2]))[0])

    @cached_property
    def roots(self) -> Tuple[complex, complex, complex]:
        """The half-period values (e1, e2, e3) = ℘(w2/2), ℘((w1+w2)/2), ℘(w1/2)."""
        half = np.array([self.w2 / 2, (self.w1 + self.w2) / 2, self.w1 / 2])
        return tuple(complex(e) for e in self._wp_reduced(half))

    @cached_property
    def invariants(self) -> Tuple[complex, complex]:
        """The invariants (g2, g3) of ℘ on this lattice."""
        return invariants_from_roots(self.roots)

    @property
    def half_periods(self) -> Tuple[complex, complex, complex]:
        return self.w2 / 2, (self.w1 + self.w2) / 2, self.w1 / 2

    def scaled(self, k1: int = 1, k2: int = 1) -> "Lattice":
        return Lattice(k1 * self.w1, k2 * self.w2)

    def __eq__(self, other):
        return (
            isinstance(other, Lattice) and self.w1 == other.w1 and self.w2 == other.w2
        )

    def __hash__(self):
        return hash((self.w1, self.w2))

    def __repr__(self):
        return f"Lattice(w1={self.w1}, w2={self.w2})"


def _evaluate(lattice: Lattice, w, func, pole_value, quasi: bool = False):
    w = np.asarray(w, dtype=complex)
    scalar = w.ndim == 0
    w = np.atleast_1d(w)

    w0, n1, n2 = lattice.reduce(w)
    with np.errstate(all="ignore"):
        values = func(w0)
    if quasi:
        values = values + 2 * n1 * lattice.eta1 + 2 * n2 * lattice.eta2
    values = np.where(lattice._at_pole(w0), pole_value, values)

    if scalar:
        return complex(values[0])
    return values


def wp(lattice: Lattice, w):
    """Weierstrass ℘ function. Poles evaluate to infinity."""
    return _evaluate(lattice, w, lattice._wp_reduced, np.inf + 0j)


def wp_prime(lattice: Lattice, w):
    """Derivative ℘′ of the Weierstrass ℘ function."""
    return _evaluate(lattice, w, lattice._wp_prime_reduced, np.inf + 0j)


def wp_second(lattice: Lattice, w):
    """Second derivative ℘″ = 6℘² - g2/2."""
    g2, _ = lattice.invariants
    return 6 * wp(lattice, w) ** 2 - g2 / 2


def zeta(lattice: Lattice, w):
    """Weierstrass ζ function, including its quasi-periodic shifts."""
    return _evaluate(lattice, w, lattice._zeta_reduced, np.inf + 0j, quasi=True)


def invariants_from_roots(roots: Iterable[complex]) -> Tuple[complex, complex]:
    """Get (g2, g3) from the roots of 4X³ - g2 X - g3.

    Args:
        roots: The three roots (e1, e2, e3), which must sum to zero.

    Returns:
        The invariants g2 = -4(e1 e2 + e1 e3 + e2 e3) and g3 = 4 e1 e2 e3.
    """
    e1, e2, e3 = roots
    g2 = -4 * (e1 * e2 + e1 * e3 + e2 * e3)
    g3 = 4 * e1 * e2 * e3
    return g2, g3


def addition(lattice: Lattice, w, v) -> Tuple[complex, complex]:
    """Addition theorems for ℘ and ζ.

    Args:
        lattice: The lattice.
        w: The first argument.
        v: The second argument, with ℘(v) ≠ ℘(w).

    Returns:
        The tuple (℘(w + v), ζ(w + v)).
    """
    pw, pv = wp(lattice, w), wp(lattice, v)
    if abs(pw - pv) < 1e-12 * (1 + abs(pw)):
        raise ValueError("Addition formula needs ℘(w) ≠ ℘(v)")

    ratio = (wp_prime(lattice, w) - wp_prime(lattice, v)) / (pw - pv)
    wp_sum = ratio**2 / 4 - pw - pv
    zeta_sum = zeta(lattice, w) + zeta(lattice, v) + ratio / 2
    return wp_sum, zeta_sum


def landen_sum(lattice: Lattice, p: int, w):
    """℘ on the lattice (w1, w2/p) expressed through ℘ on (w1, w2).

    ℘(w; w1, w2/p) = Σ_{l<p} ℘(w + l w2/p) - Σ_{0<l<p} ℘(l w2/p).
    """
    shifts = np.arange(p) * lattice.w2 / p
    total = sum(wp(lattice, np.asarray(w) + s) for s in shifts)
    return total - sum(wp(lattice, s) for s in shifts[1:])


def legendre_residual(lattice: Lattice) -> float:
    """Residual of the Legendre relation η2 w1 - η1 w2 = iπ sign(Im(w1/w2))."""
    sign = np.sign((lattice.w1 / lattice.w2).imag)
    return abs(lattice.eta2 * lattice.w1 - lattice.eta1 * lattice.w2 - 1j * np.pi * sign)


def quasi_phi(lattice: Lattice, w):
    """The function φ with φ(w + w1) = φ(w) and φ(w + w2) = φ(w) + 1.

    φ(w) = (w1 / 2πi) ζ(w) - (w / iπ) ζ(w1/2). It has one simple pole per cell,
    at the lattice points.

    Args:
        lattice: The lattice.
        w: The evaluation point(s).

    Returns:
        φ(w). The residue at each lattice point is w1 / 2πi, not 1; a function
        with residue r at p is r (2πi / w1) φ(w - p) up to a constant.
    """
    w = np.asarray(w, dtype=complex) if not np.isscalar(w) else complex(w)
    return lattice.w1 / (2j * np.pi) * zeta(lattice, w) - w / (1j * np.pi) * lattice.eta1


def quasi_phi_prime(lattice: Lattice, w):
    """Derivative of :func:`quasi_phi`."""
    return -lattice.w1 / (2j * np.pi) * wp(lattice, w) - lattice.eta1 / (1j * np.pi)


def wp_invert(lattice: Lattice, target: complex, tol: float = 1e-12) -> complex:
    """Solve ℘(w) = target.

    Newton iterations are started from a grid of seeds covering the cell and
    from the small-w asymptote 1/√target.

    Args:
        lattice: The lattice.
        target: The target value. Infinity maps to the lattice origin.
        tol: Required accuracy of ℘(w) relative to 1 + |target|.

    Returns:
        One solution w, reduced into the fundamental cell. The other solution
        is -w.
    """
    target = complex(target)
    if not np.isfinite(target):
        return 0j

    for half, root in zip(lattice.half_periods, lattice.roots):
        if abs(target - root) <= tol * (1 + abs(target)):
            return complex(half)

    grid = np.linspace(0.05, 0.95, 10)
    a, b = np.meshgrid(grid, grid)
    seeds = (a * lattice.w1 + b * lattice.w2).ravel()
    asymptote = 1 / np.sqrt(target) if target != 0 else lattice.w2 / 2
    seeds = np.concatenate([seeds, [asymptote, -asymptote]])

    w = seeds.astype(complex)
    with np.errstate(all="ignore"):
        for _ in range(60):
            step = (wp(lattice, w) - target) / wp_prime(lattice, w)
            step = np.where(np.isfinite(step), step, 0)
            w = w - step
            if np.all(np.abs(step) < 1e-15 * abs(lattice.w2)):
                break
        residual = np.abs(wp(lattice, w) - target)

    residual = np.where(np.isfinite(residual), residual, np.inf)
    best = int(np.argmin(residual))
    if residual[best] > 1e3 * tol * (1 + abs(target)):
        raise RuntimeError(
            f"Could not invert ℘ at {target} (best residual {residual[best]:.3g})"
        )

    return complex(lattice.to_cell(w[best]))


def wp_invert_all(lattice: Lattice, target: complex) -> Tuple[complex, complex]:
    """Both solutions (w, -w) of ℘(w) = target, reduced into the fundamental cell."""
    w = wp_invert(lattice, target)
    return w, complex(lattice.to_cell(-w))


def elliptic_from_principal_parts(
    lattice: Lattice, parts: Dict[complex, Dict[int, complex]], w
):
    """Build an elliptic function from its principal parts, up to a constant.

    A principal part Σ c_k (w - p)^-k maps to c1 ζ(w - p) + c2 ℘(w - p)
    - c3 ℘′(w - p) / 2.

    Args:
        lattice: The lattice.
        parts: Mapping of pole to a mapping of order to coefficient. The
            residues must sum to zero.
        w: The evaluation point(s).

    Returns:
        The elliptic function at w, normalised up to an additive constant.
    """
    residue_sum = sum(coeffs.get(1, 0) for coeffs in parts.values())
    scale = max(abs(c) for coeffs in parts.values() for c in coeffs.values())
    if abs(residue_sum) > 1e-8 * max(scale, 1):
        raise ValueError(f"Residues do not sum to zero ({residue_sum:.3g})")

    w = np.asarray(w, dtype=complex)
    total = np.zeros(w.shape, dtype=complex)
    for pole, coeffs in parts.items():
        for order, coeff in coeffs.items():
            if order == 1:
                total = total + coeff * zeta(lattice, w - pole)
            elif order == 2:
                total = total + coeff * wp(lattice, w - pole)
            elif order == 3:
                total = total - coeff * wp_prime(lattice, w - pole) / 2
            else:
                raise ValueError(f"Unsupported pole order: {order}")
    return total
