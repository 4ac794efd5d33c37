"""
Mittag-Leffler type series for the boundary functions when ω₃/ω₂ = k/ℓ.

With F a principal part of f_y at a pole f (Re f ∈ [-ω₂/2, ω₂/2)), the terms

    A = -w F(ω + S) - w F(-ω + 2ω_y2 + S) + 2w F(ω_y2 + S),
    S = sω₂ + nω₃ + pω₁,  w = ⌊n/ℓ⌋ + 1,

summed over s < k, n ≥ 0, p ∈ Z and all poles f give r_y(ω) - r_y(ω_y2). The
mirror terms B, built from f_x with shifts -S and centre ω_x2, give
r_x(ω) - r_x(ω_x2). Two summation orderings are available: "rows" sums p in
closed form and n directly; "columns" sums n in closed form with digamma
functions and p directly, closing the p sum with a fitted power-law tail.
"""

import logging
import math
from functools import cached_property
from typing import Dict, List, Optional, Tuple

import mpmath
import numpy as np
from monty.json import MSONable
from numpy.polynomial import polynomial as P
from scipy.special import zeta as hurwitz_zeta

from qwalk.constants import pole_refusal
from qwalk.continuation.contour import circle_scale, taylor_coefficients
from qwalk.continuation.poles import PrincipalPart, fx_poles, fy_poles
from qwalk.elliptic.uniformization import Uniformization
from qwalk.elliptic.weierstrass import cot_csc2

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

_kappa = (1, 1, -2)
_orderings = ("rows", "columns")
_ratio_tol = 1e-9
_tail_orders = 4


class SeriesConfig(MSONable):
    """Settings for the series evaluation.

    Args:
        ordering: "rows" or "columns".
        tol: Target accuracy.
        p_max: Largest |p| of the partial sums in the columns ordering.
        n_max: Largest n in the rows ordering.
    """

    def __init__(
        self,
        ordering: str = "rows",
        tol: float = 1e-10,
        p_max: int = 128,
        n_max: int = 400,
    ):
        if ordering not in _orderings:
            raise ValueError(f"Unrecognised series ordering: {ordering}")
        if p_max < 16:
            raise ValueError("p_max must be at least 16")
        self.ordering = ordering
        self.tol = tol
        self.p_max = p_max
        self.n_max = n_max

    @classmethod
    def from_settings(cls, settings: Dict) -> "SeriesConfig":
        return cls(
            ordering=settings["series_ordering"],
            tol=settings["series_tol"],
            p_max=settings["p_max"],
            n_max=settings["n_max"],
        )


class SeriesResult(MSONable):
    """A series value with its estimated truncation error.

    Args:
        value: The value(s) of the series.
        est_tail: Estimate of the truncation error.
        terms_used: Number of n terms (rows) or of p terms (columns).
    """

    def __init__(self, value, est_tail: float, terms_used: int):
        self.value = value
        self.est_tail = est_tail
        self.terms_used = terms_used


def _wrap(value: float, lo: float, width: float) -> float:
    return value - math.floor((value - lo) / width) * width


def _translate(parts: List[PrincipalPart], re_lo: float, U: Uniformization):
    w1 = abs(U.w1)
    translated = []
    for part in parts:
        pole = complex(
            _wrap(part.pole.real, re_lo, U.w2), _wrap(part.pole.imag, -w1 / 2, w1)
        )
        translated.append(PrincipalPart(pole, part.coeffs))
    return translated


def _sums_over_p(q, v, orders):
    """Σ_p (v + pω₁)^-j for j in orders, in closed form with q = π/ω₁."""
    cot, csc2 = cot_csc2(q * v)
    sums = {1: q * cot, 2: q**2 * csc2, 3: q**3 * cot * csc2}
    return {j: sums[j] for j in orders}


def _sums_over_n(a, orders):
    """Regularised Σ_m (m + 1)(m + a)^-j for j in orders.

    The divergent parts are independent of a (j ≥ 2) or linear in a (j = 1),
    and cancel in the combinations used by the series.
    """
    psi0 = mpmath.psi(0, a)
    sums = {}
    if 1 in orders:
        sums[1] = (a - 1) * psi0
    if 2 in orders or 3 in orders:
        psi1 = mpmath.psi(1, a)
        if 2 in orders:
            sums[2] = -psi0 + (1 - a) * psi1
        if 3 in orders:
            sums[3] = psi1 - (1 - a) * mpmath.psi(2, a) / 2
    return {j: complex(s) for j, s in sums.items()}


def even_power_tail(pairs: List[np.ndarray]) -> np.ndarray:
    """Σ_{p>P} G(p) from a fit of G(p) = Σ_m D_m p^(-2m) to the last terms.

    G(p) is the sum of the p and -p columns, P = len(pairs). The fit uses
    p in [P/2, P] and the fitted powers are summed with Hurwitz zeta functions.
    """
    size = len(pairs)
    p = np.arange(size // 2, size + 1)
    orders = 2 * np.arange(1, _tail_orders + 1)
    basis = (size / p[:, None]) ** orders
    values = np.stack([pairs[i - 1] for i in p])
    coeffs, *_ = np.linalg.lstsq(basis, values, rcond=None)
    scale = float(size) ** orders
    return (hurwitz_zeta(orders, size + 1) * scale) @ coeffs


class SeriesSolution:
    """Series evaluation of r_x and r_y for a walk with ω₃/ω₂ = k/ℓ.

    Args:
        U: The uniformization.
        k: Numerator of the period ratio.
        l: Denominator of the period ratio.
        config: The series settings.
        fy_parts: Principal parts of f_y. Computed if not given.
        fx_parts: Principal parts of f_x. Computed if not given.
    """

    def __init__(
        self,
        U: Uniformization,
        k: int,
        l: int,  # noqa: E741
        config: Optional[SeriesConfig] = None,
        fy_parts: Optional[List[PrincipalPart]] = None,
        fx_parts: Optional[List[PrincipalPart]] = None,
    ):
        error = abs(U.periods.ratio - k / l)
        if error > _ratio_tol:
            raise ValueError(
                f"Period ratio {U.periods.ratio:.12f} does not match {k}/{l} "
                f"(error {error:.2e})"
            )

        self.U = U
        self.k = k
        self.l = l  # noqa: E741
        self.config = config or SeriesConfig()

        points = U.named_points
        self.centre_y = points["y2"]
        self.centre_x = points["x2"]

        if fy_parts is None:
            fy_parts = fy_poles(U)
        if fx_parts is None:
            fx_parts = fx_poles(U)
        self.fy_parts = _translate(fy_parts, -U.w2 / 2, U)
        self.fx_parts = _translate(fx_parts, U.w2 / 2 + U.w3 / 2, U)

    def _terms(self, which: str):
        if which == "y":
            return self.fy_parts, self.centre_y, 1
        return self.fx_parts, self.centre_x, -1

    def pole_distance(self, omega: complex, which: str) -> float:
        """Distance from ω to the nearest pole of any series term."""
        parts, centre, direction = self._terms(which)
        U = self.U
        w1 = abs(U.w1)
        distance = np.inf
        for part in parts:
            for line in (omega, -omega + 2 * centre):
                for s in range(self.k):
                    v = direction * (line - part.pole) + s * U.w2
                    n = max(0, round(-v.real / U.w3))
                    d_re = v.real + n * U.w3
                    d_im = v.imag - round(v.imag / w1) * w1
                    distance = min(distance, math.hypot(d_re, d_im))
        return distance

    def _check_off_poles(self, omega: np.ndarray, which: str):
        limit = pole_refusal * self.U.w2
        for w in np.atleast_1d(omega):
            if self.pole_distance(complex(w), which) < limit:
                safe = complex(w) + 1e-3 * self.U.w2 * (1 + 1j)
                raise ValueError(
                    f"ω = {complex(w):.10g} lies within {limit:.2e} of a pole of the "
                    f"series; try ω = {safe:.10g}"
                )

    def _lines(self, omega, centre):
        return (omega, -omega + 2 * centre, np.full_like(omega, centre))

    def _rows(self, omega, which):
        parts, centre, direction = self._terms(which)
        U, cfg = self.U, self.config
        q = np.pi / U.w1
        lines = self._lines(omega, centre)

        total = np.zeros_like(omega)
        n_small = 0
        for n in range(cfg.n_max):
            weight = n // self.l + 1
            term = np.zeros_like(omega)
            for s in range(self.k):
                shift = direction * (s * U.w2 + n * U.w3)
                for part in parts:
                    for line, kappa in zip(lines, _kappa):
                        sums = _sums_over_p(q, line + shift - part.pole, part.coeffs)
                        for j, c in part.coeffs.items():
                            term = term - weight * kappa * c * sums[j]
            total = total + term

            size = float(np.max(np.abs(term)))
            if size < 1e-3 * cfg.tol * (1 + float(np.max(np.abs(total)))):
                n_small += 1
            else:
                n_small = 0
            if n_small >= 2 and n >= 2 * self.l:
                return SeriesResult(total, size, n + 1)

        raise RuntimeError(
            f"Series (rows) did not converge within n_max = {cfg.n_max}; "
            f"last partial sum {total}, last term size {size:.2e}"
        )

    def _column_term(self, omega, which, p):
        parts, centre, direction = self._terms(which)
        U = self.U
        h = self.k * U.w2
        lines = self._lines(omega, centre)

        term = np.zeros_like(omega)
        for idx in range(len(omega)):
            value = 0j
            for part in parts:
                for s in range(self.k):
                    for r in range(self.l):
                        offset = s * U.w2 + r * U.w3 + p * U.w1
                        for line, kappa in zip(lines, _kappa):
                            a = (direction * (line[idx] - part.pole) + offset) / h
                            sums = _sums_over_n(a, part.coeffs)
                            for j, c in part.coeffs.items():
                                value -= kappa * c * direction**j * sums[j] / h**j
            term[idx] = value
        return term

    def _columns(self, omega, which):
        cfg = self.config
        total = self._column_term(omega, which, 0)
        pairs = []
        previous = None
        size = 8
        while True:
            for p in range(len(pairs) + 1, size + 1):
                pair = self._column_term(omega, which, p) + self._column_term(
                    omega, which, -p
                )
                pairs.append(pair)
                total = total + pair
            value = total + even_power_tail(pairs)
            if previous is not None:
                tail = float(np.max(np.abs(value - previous)))
                if tail < cfg.tol:
                    return SeriesResult(value, tail, size)
            if 2 * size > cfg.p_max:
                break
            previous = value
            size *= 2

        logger.warning(
            f"Series (columns) tail error {tail:.2e} exceeds the target "
            f"{cfg.tol:.2e} at p_max = {cfg.p_max}"
        )
        return SeriesResult(value, tail, size)

    def evaluate(self, omega, which: str = "y") -> SeriesResult:
        """Evaluate the series at ω (scalar or array).

        Args:
            omega: The evaluation point(s).
            which: "y" for r_y(ω) - r_y(ω_y2), "x" for r_x(ω) - r_x(ω_x2).

        Returns:
            The series result.
        """
        if which not in ("x", "y"):
            raise ValueError(f"Unrecognised series: {which}")

        scalar = np.ndim(omega) == 0
        omega = np.atleast_1d(np.asarray(omega, dtype=complex))
        self._check_off_poles(omega, which)

        if self.config.ordering == "rows":
            result = self._rows(omega, which)
        else:
            result = self._columns(omega, which)

        if scalar:
            result.value = complex(result.value[0])
        return result

    def a_series(self, omega):
        """r_y(ω) - r_y(ω_y2)."""
        return self.evaluate(omega, "y").value

    def b_series(self, omega):
        """r_x(ω) - r_x(ω_x2)."""
        return self.evaluate(omega, "x").value

    @cached_property
    def anchors(self) -> Dict:
        """Additive constants and K(0,0)Q(0,0) from the zeros of x and y in Δ.

        r_x(ω₀) = K(0,0)Q(0,0) at the zeros ω₀ of x in Δ_x, r_y(ω₀) = K(0,0)Q(0,0)
        at the zeros of y in Δ_y, and r_x + r_y = K(0,0)Q(0,0) + xy on the curve.
        """
        U = self.U
        zeros_x = U.zeros_in_delta("x")
        zeros_y = U.zeros_in_delta("y")

        omega_y = next((w for w in zeros_y if U.finite(U.x(w))), None)
        omega_x = next((w for w in zeros_x if U.finite(U.y(w))), None)
        if omega_y is None or omega_x is None:
            raise RuntimeError("No zero in Δ with a finite conjugate variable")

        b_y = self.b_series(omega_y)
        k00q00_values = [self.b_series(w) - b_y for w in zeros_x]
        c_x = -b_y
        c_y = -self.a_series(omega_x)
        k00q00_values.append(self.a_series(omega_y) + c_y)

        k00q00 = k00q00_values[0]
        consistency = max(abs(v - k00q00) for v in k00q00_values)
        logger.debug(
            f"K(0,0)Q(0,0) = {k00q00} from {len(k00q00_values)} anchors "
            f"(spread {consistency:.2e})"
        )
        return {
            "omega0_x": zeros_x,
            "omega0_y": zeros_y,
            "omega_y": omega_y,
            "c_x": c_x,
            "c_y": c_y,
            "k00q00": k00q00,
            "consistency": consistency,
        }

    def r_y(self, omega):
        return self.a_series(omega) + self.anchors["c_y"]

    def r_x(self, omega):
        return self.b_series(omega) + self.anchors["c_x"]

    @property
    def k00q00(self) -> complex:
        return self.anchors["k00q00"]

    def q00(self) -> complex:
        """Q(0, 0) from the series.

        If K(0,0) vanishes, Q(0,0) is the ratio of the first non-vanishing
        Taylor coefficients of r_y and K(0, y(ω)) at the zero of y.
        """
        U = self.U
        k00 = U.z * U.steps.weight(-1, -1)
        if k00 != 0:
            return self.k00q00 / k00

        omega_y = self.anchors["omega_y"]
        radius = min(0.25 * self.pole_distance(omega_y, "y"), 0.05 * U.w2)
        kernel = U.curve.kernel

        def k0y(w):
            return P.polyval(U.y(w), kernel.ct)

        k_coeffs = taylor_coefficients(k0y, omega_y, radius, max_order=4)
        scale = circle_scale(k0y, omega_y, radius)
        orders = [
            m for m in range(1, 5) if abs(k_coeffs[m]) * radius**m > 1e-8 * scale
        ]
        if not orders:
            raise RuntimeError("K(0, y(ω)) vanishes to high order at the zero of y")

        order = orders[0]
        r_coeffs = taylor_coefficients(self.a_series, omega_y, radius, max_order=order)
        return complex(r_coeffs[order] / k_coeffs[order])

    def _branch_point(self, candidates, lo: float) -> complex:
        hi = lo + self.U.w2 / 2
        for w in candidates:
            w = complex(w)
            shifted = w + math.ceil((lo - w.real) / self.U.w2) * self.U.w2
            if shifted.real < hi:
                return shifted
        raise RuntimeError(f"No preimage found with real part in [{lo}, {hi})")

    def q_x0(self, x0: complex, branch: int = 1) -> complex:
        """Q(x0, 0) from the preimage of x0 with Re ω in [bω₂/2, (b+1)ω₂/2).

        Branches b and 1 - b give the same value.
        """
        U = self.U
        kx0 = P.polyval(x0, U.curve.kernel.c)
        if abs(kx0) < 1e-300:
            raise ValueError(f"K(x0, 0) vanishes at x0 = {x0}")
        omega = self._branch_point(U.omega_of_x(x0), branch * U.w2 / 2)
        return complex(self.r_x(omega) / kx0)

    def q_0y(self, y0: complex, branch: int = 1) -> complex:
        """Q(0, y0) from the preimage of y0 with Re ω in [bω₂/2, (b+1)ω₂/2) + ω₃/2."""
        U = self.U
        k0y = P.polyval(y0, U.curve.kernel.ct)
        if abs(k0y) < 1e-300:
            raise ValueError(f"K(0, y0) vanishes at y0 = {y0}")
        omega = self._branch_point(U.omega_of_y(y0), branch * U.w2 / 2 + U.w3 / 2)
        return complex(self.r_y(omega) / k0y)


def r_y_series(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    omega,
    config: Optional[SeriesConfig] = None,
) -> SeriesResult:
    """Evaluate r_y(ω) - r_y(ω_y2) by the series."""
    return SeriesSolution(U, k, l, config).evaluate(omega, "y")


def r_x_series(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    omega,
    config: Optional[SeriesConfig] = None,
) -> SeriesResult:
    """Evaluate r_x(ω) - r_x(ω_x2) by the series."""
    return SeriesSolution(U, k, l, config).evaluate(omega, "x")


def recover_gfs(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    omega,
    config: Optional[SeriesConfig] = None,
) -> Tuple[complex, complex, complex]:
    """Recover r_x(ω), r_y(ω) and K(0,0)Q(0,0) from the series alone."""
    solution = SeriesSolution(U, k, l, config)
    return solution.r_x(omega), solution.r_y(omega), solution.k00q00


def q_from_omega(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    x0: complex,
    branch: int = 1,
    config: Optional[SeriesConfig] = None,
) -> complex:
    """Q(x0, 0) from the series on the chosen branch."""
    return SeriesSolution(U, k, l, config).q_x0(x0, branch)


def q_from_omega_y(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    y0: complex,
    branch: int = 1,
    config: Optional[SeriesConfig] = None,
) -> complex:
    """Q(0, y0) from the series on the chosen branch."""
    return SeriesSolution(U, k, l, config).q_0y(y0, branch)


def a_term(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    part: PrincipalPart,
    s: int,
    p: int,
    n: int,
    omega,
):
    """A single term of the r_y series for the principal part F of f_y.

    -w F(ω + S) - w F(-ω + 2ω_y2 + S) + 2w F(ω_y2 + S) with
    S = sω₂ + nω₃ + pω₁ and w = ⌊n/ℓ⌋ + 1.
    """
    if not (0 <= s < k and n >= 0):
        raise ValueError(f"Term indices out of range: s = {s}, n = {n}")
    centre = U.named_points["y2"]
    shift = s * U.w2 + n * U.w3 + p * U.w1
    weight = n // l + 1
    omega = np.asarray(omega, dtype=complex)
    return weight * (
        -part(omega + shift) - part(-omega + 2 * centre + shift) + 2 * part(centre + shift)
    )


def b_term(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    part: PrincipalPart,
    s: int,
    p: int,
    n: int,
    omega,
):
    """A single term of the r_x series for the principal part F of f_x.

    -w F(ω - S) - w F(-ω + 2ω_x2 - S) + 2w F(ω_x2 - S).
    """
    if not (0 <= s < k and n >= 0):
        raise ValueError(f"Term indices out of range: s = {s}, n = {n}")
    centre = U.named_points["x2"]
    shift = s * U.w2 + n * U.w3 + p * U.w1
    weight = n // l + 1
    omega = np.asarray(omega, dtype=complex)
    return weight * (
        -part(omega - shift) - part(-omega + 2 * centre - shift) + 2 * part(centre - shift)
    )
