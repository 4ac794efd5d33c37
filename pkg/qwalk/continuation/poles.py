"""
The elliptic functions f_x and f_y, their principal parts, orbit sums and the
pole ledgers of the continued boundary functions r_x and r_y.
"""

import logging
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from monty.json import MSONable
from numpy.polynomial import polynomial as P

from qwalk.continuation.contour import circle_scale, laurent_coefficients
from qwalk.elliptic.uniformization import Uniformization
from qwalk.elliptic.weierstrass import wp_invert_all

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

_max_order = 3
_negligible = 1e-8
_forms = ("product", "derivative")


class PrincipalPart(MSONable):
    """The principal part Σ c_k (ω - pole)^-k of a meromorphic function.

    Args:
        pole: The pole location.
        coeffs: Mapping of order k to coefficient c_k.
    """

    def __init__(self, pole: complex, coeffs: Dict[int, complex]):
        self.pole = complex(pole)
        self.coeffs = {int(k): complex(v) for k, v in coeffs.items()}

    @property
    def order(self) -> int:
        return max(self.coeffs) if self.coeffs else 0

    @property
    def residue(self) -> complex:
        return self.coeffs.get(1, 0j)

    def __call__(self, omega):
        omega = np.asarray(omega, dtype=complex)
        with np.errstate(all="ignore"):
            return sum(c / (omega - self.pole) ** k for k, c in self.coeffs.items())

    def shifted(self, delta: complex) -> "PrincipalPart":
        return PrincipalPart(self.pole + delta, self.coeffs)

    def scale(self) -> float:
        return max((abs(c) for c in self.coeffs.values()), default=0.0)

    def to_report(self) -> Dict:
        return {"pole": self.pole, "coeffs": {str(k): v for k, v in self.coeffs.items()}}

    def __repr__(self):
        return f"PrincipalPart(pole={self.pole:.6g}, coeffs={self.coeffs})"


def _finite(values, scalar):
    values = np.where(np.isfinite(values), values, np.inf + 0j)
    return complex(values) if scalar else values


def f_y(U: Uniformization, omega, form: str = "product"):
    """The elliptic function f_y(ω) = x(ω)[y(ξ̂ω) - y(ω)].

    The derivative form x(ω) x′(ω) / 2a(x(ω)) gives the same function. Poles
    evaluate to infinity.
    """
    if form not in _forms:
        raise ValueError(f"Unrecognised form: {form}")

    scalar = np.ndim(omega) == 0
    omega = np.asarray(omega, dtype=complex)
    with np.errstate(all="ignore"):
        x = U.x(omega)
        if form == "product":
            value = x * (U.y(U.xi_hat(omega)) - U.y(omega))
        else:
            value = x * U.x_prime(omega) / (2 * P.polyval(x, U.curve.kernel.a))
    return _finite(value, scalar)


def f_x(U: Uniformization, omega, form: str = "product"):
    """The elliptic function f_x(ω) = y(ω)[x(η̂ω) - x(ω)].

    The derivative form is -y(ω) y′(ω) / 2ã(y(ω)). Poles evaluate to infinity.
    """
    if form not in _forms:
        raise ValueError(f"Unrecognised form: {form}")

    scalar = np.ndim(omega) == 0
    omega = np.asarray(omega, dtype=complex)
    with np.errstate(all="ignore"):
        y = U.y(omega)
        if form == "product":
            value = y * (U.x(U.eta_hat(omega)) - U.x(omega))
        else:
            value = -y * U.y_prime(omega) / (2 * P.polyval(y, U.curve.kernel.at))
    return _finite(value, scalar)


def _polynomial_roots(coeffs) -> np.ndarray:
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
    if len(coeffs) <= 1:
        return np.array([])
    return P.polyroots(coeffs)


def _pole_candidates(U: Uniformization, variable: str) -> List[complex]:
    if variable == "x":
        gmap, leading, shift = U.gx, U.curve.kernel.a, 0.0
    else:
        gmap, leading, shift = U.gy, U.curve.kernel.at, U.w3 / 2

    targets = [gmap.inverse(np.inf)]
    targets += [gmap.inverse(r) for r in _polynomial_roots(leading)]

    candidates = []
    for target in targets:
        for w in wp_invert_all(U.lattice, target):
            w = complex(U.lattice.to_cell(w + shift))
            if all(not U.lattice.equivalent(w, c) for c in candidates):
                candidates.append(w)
    return candidates


def _min_separation(U: Uniformization, points: List[complex]) -> float:
    separation = min(U.w2, abs(U.w1))
    for i, p in enumerate(points):
        for q in points[i + 1 :]:
            separation = min(separation, abs(complex(U.lattice.reduce(p - q)[0])))
    return separation


def locate_poles(
    U: Uniformization,
    func,
    candidates: List[complex],
    n_points: int = 64,
    radius_factor: float = 0.05,
) -> List[PrincipalPart]:
    """Principal parts of func at candidate poles by contour integration.

    Candidates whose principal part vanishes are removable and dropped.

    Args:
        U: The uniformization.
        func: Vectorised function of ω.
        candidates: The candidate pole locations.
        n_points: The number of contour nodes.
        radius_factor: Contour radius as a fraction of the minimum separation.

    Returns:
        The principal parts, sorted by pole location.
    """
    radius = radius_factor * _min_separation(U, candidates)
    parts = []
    for pole in candidates:
        coeffs = laurent_coefficients(func, pole, radius, n_points)
        scale = circle_scale(func, pole, radius, n_points)
        significant = {
            m: c for m, c in coeffs.items() if abs(c) / radius**m > _negligible * scale
        }
        if any(m > _max_order for m in significant):
            raise RuntimeError(
                f"Pole at ω = {pole:.6g} has order {max(significant)} > {_max_order}"
            )
        if significant:
            parts.append(PrincipalPart(pole, significant))
        else:
            logger.debug(f"Removable singularity at ω = {pole:.6g}")

    parts.sort(key=lambda p: (round(p.pole.real, 10), round(p.pole.imag, 10)))
    _check_residues(parts)
    return parts


def _check_residues(parts: List[PrincipalPart]):
    total = sum(p.residue for p in parts)
    scale = max((p.scale() for p in parts), default=0.0)
    if abs(total) > 1e-7 * max(scale, 1.0):
        logger.warning(f"Residues in the period cell sum to {total:.3g}, not zero")


def fy_poles(
    U: Uniformization, n_points: int = 64, radius_factor: float = 0.05
) -> List[PrincipalPart]:
    """Principal parts of f_y in the fundamental cell.

    Candidate poles are the preimages of x = ∞ and of the roots of a(x).
    """
    return locate_poles(
        U,
        lambda w: f_y(U, w),
        _pole_candidates(U, "x"),
        n_points=n_points,
        radius_factor=radius_factor,
    )


def fx_poles(
    U: Uniformization, n_points: int = 64, radius_factor: float = 0.05
) -> List[PrincipalPart]:
    """Principal parts of f_x in the fundamental cell.

    Candidate poles are the preimages of y = ∞ and of the roots of ã(y).
    """
    return locate_poles(
        U,
        lambda w: f_x(U, w),
        _pole_candidates(U, "y"),
        n_points=n_points,
        radius_factor=radius_factor,
    )


def orbit_sum(U: Uniformization, k: int, l: int, omega):  # noqa: E741
    """The orbit sum O(ω) = Σ_{t<ℓ} f_y(ω + t ω₃)."""
    omega = np.asarray(omega, dtype=complex)
    return sum(f_y(U, omega + t * U.w3) for t in range(l))


class AlgebraicityResult(MSONable):
    """Outcome of the orbit-sum algebraicity test.

    Args:
        verdict: "algebraic" or "holonomic-transcendental".
        max_orbit_sum: Largest |O(ω)| over the samples.
        max_grouped_part: Largest grouped principal part coefficient of O.
        seed: The random seed of the samples.
    """

    def __init__(
        self, verdict: str, max_orbit_sum: float, max_grouped_part: float, seed: int
    ):
        self.verdict = verdict
        self.max_orbit_sum = max_orbit_sum
        self.max_grouped_part = max_grouped_part
        self.seed = seed

    @property
    def algebraic(self) -> bool:
        return self.verdict == "algebraic"


def grouped_orbit_parts(
    U: Uniformization, l: int, poles: List[PrincipalPart]  # noqa: E741
) -> List[PrincipalPart]:
    """Principal parts of the orbit sum, grouped by pole location."""
    grouped: List[PrincipalPart] = []
    for t in range(l):
        for part in poles:
            location = complex(U.lattice.to_cell(part.pole - t * U.w3))
            match = next(
                (g for g in grouped if U.lattice.equivalent(g.pole, location)), None
            )
            if match is None:
                grouped.append(PrincipalPart(location, part.coeffs))
            else:
                for order, c in part.coeffs.items():
                    match.coeffs[order] = match.coeffs.get(order, 0j) + c
    return grouped


def algebraicity_test(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    poles: Optional[List[PrincipalPart]] = None,
    n_samples: int = 20,
    seed: int = 0,
    tol: float = 1e-7,
) -> AlgebraicityResult:
    """Decide algebraicity from the orbit sum Σ_{t<ℓ} f_y(ω + t ω₃).

    The orbit sum is an elliptic function; it vanishes identically exactly
    when the boundary generating functions are algebraic. Both its values at
    random points and its grouped principal parts are tested.

    Args:
        U: The uniformization.
        k: Numerator of the period ratio.
        l: Denominator of the period ratio.
        poles: Principal parts of f_y. Computed if not given.
        n_samples: The number of random sample points.
        seed: The random seed.
        tol: Relative tolerance of the test.

    Returns:
        The test result.
    """
    if poles is None:
        poles = fy_poles(U)

    grouped = grouped_orbit_parts(U, l, poles)
    coeff_scale = max((p.scale() for p in poles), default=1.0)
    max_grouped = max((p.scale() for p in grouped), default=0.0)

    rng = np.random.default_rng(seed)
    samples = []
    while len(samples) < n_samples:
        w = rng.uniform(0, 1) * U.w2 + rng.uniform(0, 1) * U.w1
        distance = min(
            (abs(complex(U.lattice.reduce(w - g.pole)[0])) for g in grouped),
            default=np.inf,
        )
        if distance > 0.05 * min(U.w2, abs(U.w1)):
            samples.append(w)
    samples = np.array(samples)

    orbit = np.abs(orbit_sum(U, k, l, samples))
    scale = max(1.0, float(np.max(np.abs(f_y(U, samples)))))
    max_orbit = float(np.max(orbit))

    algebraic = max_orbit < tol * scale and max_grouped < tol * max(coeff_scale, 1.0)
    verdict = "algebraic" if algebraic else "holonomic-transcendental"
    logger.info(f"Orbit sum test: {verdict} (max |O| = {max_orbit:.2e})")
    return AlgebraicityResult(verdict, max_orbit, max_grouped, seed)


def _ledger_at(
    U: Uniformization,
    d: complex,
    poles: List[PrincipalPart],
    step: float,
    start: int,
    sign: int,
    window: Tuple[float, float],
    l: int,  # noqa: E741
    merge_tol: float,
) -> Dict[int, complex]:
    lo, hi = window
    margin = 1e-9 * U.w2
    far = max(abs(d.real - lo), abs(d.real - hi))
    n_stop = start + math.ceil(far / abs(step)) + 2

    total: Dict[int, complex] = {}
    for n in range(start, n_stop):
        p = d + n * step
        if not lo + margin < p.real < hi - margin:
            continue
        weight = (n - start) // l + 1
        for part in poles:
            if U.lattice.equivalent(p, part.pole, merge_tol):
                for order, c in part.coeffs.items():
                    total[order] = total.get(order, 0j) + sign * weight * c
    return total


def _pole_ledger(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    poles: List[PrincipalPart],
    anchor: float,
    window_anchor: float,
    direction: int,
    re_range: Tuple[float, float],
    im_range: Tuple[float, float],
    merge_tol: float,
) -> List[PrincipalPart]:
    spacing = U.w2 / l
    w1 = abs(U.w1)
    coeff_scale = max((p.scale() for p in poles), default=1.0)

    candidates: List[complex] = []
    for part in poles:
        j_lo = math.floor((re_range[0] - part.pole.real) / spacing) - 1
        j_hi = math.ceil((re_range[1] - part.pole.real) / spacing) + 1
        m_lo = math.floor((im_range[0] - part.pole.imag) / w1) - 1
        m_hi = math.ceil((im_range[1] - part.pole.imag) / w1) + 1
        for j in range(j_lo, j_hi + 1):
            for m in range(m_lo, m_hi + 1):
                d = part.pole + j * spacing + m * U.w1
                if not (re_range[0] <= d.real < re_range[1]):
                    continue
                if not (im_range[0] <= d.imag < im_range[1]):
                    continue
                if all(abs(d - c) > merge_tol * U.w2 for c in candidates):
                    candidates.append(d)

    kw2 = k * U.w2
    ledger = []
    for d in sorted(candidates, key=lambda c: (c.real, c.imag)):
        if abs(d.real - anchor) < 1e-9 * U.w2:
            continue
        if (d.real - anchor) * direction < 0:
            # approach the domain of analyticity moving towards the anchor
            coeffs = _ledger_at(
                U, d, poles, direction * U.w3, 0, -1,
                _window(window_anchor, kw2, -direction), l, merge_tol,
            )
        else:
            coeffs = _ledger_at(
                U, d, poles, -direction * U.w3, 1, 1,
                _window(window_anchor, kw2, direction), l, merge_tol,
            )
        coeffs = {
            m: c for m, c in coeffs.items() if abs(c) > _negligible * coeff_scale
        }
        if coeffs:
            ledger.append(PrincipalPart(d, coeffs))
    return ledger


def _window(anchor, width, side):
    return (anchor - width, anchor) if side < 0 else (anchor, anchor + width)


def _default_ranges(U: Uniformization, k: int, re_range, im_range):
    centre = U.named_points["x1"].real
    if re_range is None:
        re_range = (centre - k * U.w2, centre + k * U.w2)
    if im_range is None:
        im_range = (-abs(U.w1) / 2, abs(U.w1) / 2)
    return re_range, im_range


def pole_ledger_y(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    poles: Optional[List[PrincipalPart]] = None,
    re_range: Optional[Tuple[float, float]] = None,
    im_range: Optional[Tuple[float, float]] = None,
    merge_tol: float = 1e-8,
) -> List[PrincipalPart]:
    """Principal parts of the continued r_y in a region.

    A point d left of ω_y1 collects -(⌊n/ℓ⌋ + 1) times the principal part of
    f_y at d + nω₃ (n ≥ 0) for poles with real part in (Re ω_x1 - kω₂, Re ω_x1).
    A point right of ω_y1 collects (⌊(n-1)/ℓ⌋ + 1) times the principal part at
    d - nω₃ (n ≥ 1) for poles in (Re ω_x1, Re ω_x1 + kω₂).

    Args:
        U: The uniformization.
        k: Numerator of the period ratio.
        l: Denominator of the period ratio.
        poles: Principal parts of f_y. Computed if not given.
        re_range: Range of real parts. Defaults to Re ω_x1 ± kω₂.
        im_range: Range of imaginary parts. Defaults to ±|ω₁|/2.
        merge_tol: Pole matching tolerance relative to ω₂.

    Returns:
        The non-vanishing principal parts, sorted by location.
    """
    if poles is None:
        poles = fy_poles(U)
    re_range, im_range = _default_ranges(U, k, re_range, im_range)
    points = U.named_points
    return _pole_ledger(
        U, k, l, poles, points["y1"].real, points["x1"].real, 1,
        re_range, im_range, merge_tol,
    )


def pole_ledger_x(
    U: Uniformization,
    k: int,
    l: int,  # noqa: E741
    poles: Optional[List[PrincipalPart]] = None,
    re_range: Optional[Tuple[float, float]] = None,
    im_range: Optional[Tuple[float, float]] = None,
    merge_tol: float = 1e-8,
) -> List[PrincipalPart]:
    """Principal parts of the continued r_x in a region.

    The mirror of :func:`pole_ledger_y`: a point right of ω_x1 collects
    -(⌊n/ℓ⌋ + 1) times the principal part of f_x at d - nω₃ (n ≥ 0) for poles in
    (Re ω_y1, Re ω_y1 + kω₂); a point left of ω_x1 collects (⌊(n-1)/ℓ⌋ + 1) times
    the principal part at d + nω₃ (n ≥ 1) for poles in (Re ω_y1 - kω₂, Re ω_y1).
    """
    if poles is None:
        poles = fx_poles(U)
    re_range, im_range = _default_ranges(U, k, re_range, im_range)
    points = U.named_points
    return _pole_ledger(
        U, k, l, poles, points["x1"].real, points["y1"].real, -1,
        re_range, im_range, merge_tol,
    )
