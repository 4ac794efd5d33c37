"""
Small-step sets, the kernel of the quarter-plane functional equation and the
group of the walk.
"""

import logging
import re
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from monty.json import MSONable
from numpy.polynomial import polynomial as P

from qwalk.constants import compass_steps, group_tol, small_steps, step_names

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

_pair_re = re.compile(r"^\(\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*\)$")
_token_split_re = re.compile(r",(?![^()]*\))")


class StepSet(MSONable):
    """A set of small steps in {-1, 0, 1}² \\ {(0, 0)}.

    Steps are stored in canonical (row-major) order so that equal sets compare
    and hash equal.

    Args:
        steps: The steps as (i, j) pairs.
    """

    def __init__(self, steps: Iterable[Tuple[int, int]]):
        steps = [tuple(int(c) for c in s) for s in steps]
        if len(steps) == 0:
            raise ValueError("Empty step set")

        for step in steps:
            if step not in small_steps:
                raise ValueError(f"Step outside the small-step range: {step}")

        if len(set(steps)) != len(steps):
            raise ValueError("Duplicate step in step set")

        self.steps = tuple(s for s in small_steps if s in steps)

    @property
    def size(self) -> int:
        return len(self.steps)

    @property
    def delta(self) -> Dict[Tuple[int, int], int]:
        """The indicator δ(i, j) of all eight small steps."""
        return {s: int(s in self.steps) for s in small_steps}

    def weight(self, i: int, j: int) -> int:
        return int((i, j) in self.steps)

    def transpose(self) -> "StepSet":
        return StepSet([(j, i) for i, j in self.steps])

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(step_names[s] for s in self.steps)

    def __eq__(self, other):
        return isinstance(other, StepSet) and self.steps == other.steps

    def __hash__(self):
        return hash(self.steps)

    def __repr__(self):
        return f"StepSet({','.join(self.names)})"

    def __str__(self):
        return ",".join(self.names)


def parse_stepset(stepset_str: str) -> StepSet:
    """Parse a step set.

    Args:
        stepset_str: Comma separated compass names (N, NE, E, SE, S, SW, W, NW,
            case insensitive) or explicit pairs, e.g., "NE,W,S" or
            "(1,1),(-1,0),(0,-1)". The two forms may be mixed.

    Returns:
        The step set.
    """
    stepset_str = stepset_str.strip()
    if not stepset_str:
        raise ValueError("Empty step set")

    steps = []
    for token in _token_split_re.split(stepset_str):
        token = token.strip()
        match = _pair_re.match(token)
        if match:
            step = (int(match.group(1)), int(match.group(2)))
            if step not in small_steps:
                raise ValueError(f"Step outside the small-step range: {token}")
        elif token.upper() in compass_steps:
            step = compass_steps[token.upper()]
        else:
            raise ValueError(f"Unrecognised step: '{token}'")

        if step in steps:
            raise ValueError(f"Duplicate step: '{token}'")
        steps.append(step)

    return StepSet(steps)


class KernelCoefficients(MSONable):
    """Coefficients of the kernel K(x, y) = a(x) y² + b(x) y + c(x).

    All polynomials are stored in ascending powers. The transposed set
    (at, bt, ct) gives K(x, y) = ã(y) x² + b̃(y) x + c̃(y).
    """

    def __init__(self, a, b, c, at, bt, ct):
        self.a = np.asarray(a, dtype=float)
        self.b = np.asarray(b, dtype=float)
        self.c = np.asarray(c, dtype=float)
        self.at = np.asarray(at, dtype=float)
        self.bt = np.asarray(bt, dtype=float)
        self.ct = np.asarray(ct, dtype=float)


def kernel_coefficients(steps: StepSet, z: float) -> KernelCoefficients:
    """Get the kernel coefficients of the walk with step weight z."""
    d = steps.delta
    a = [z * d[-1, 1], z * d[0, 1], z * d[1, 1]]
    b = [z * d[-1, 0], -1.0, z * d[1, 0]]
    c = [z * d[-1, -1], z * d[0, -1], z * d[1, -1]]
    at = [z * d[1, -1], z * d[1, 0], z * d[1, 1]]
    bt = [z * d[0, -1], -1.0, z * d[0, 1]]
    ct = [z * d[-1, -1], z * d[-1, 0], z * d[-1, 1]]
    return KernelCoefficients(a, b, c, at, bt, ct)


def kernel_eval(steps: StepSet, x, y, z: float):
    """Evaluate K(x, y) = xy (z S(x, y) - 1).

    Args:
        steps: The step set.
        x: The x value(s).
        y: The y value(s).
        z: The step weight.

    Returns:
        The kernel value(s).
    """
    coeffs = kernel_coefficients(steps, z)
    x = np.asarray(x)
    y = np.asarray(y)
    return P.polyval(x, coeffs.a) * y**2 + P.polyval(x, coeffs.b) * y + P.polyval(
        x, coeffs.c
    )


def step_polynomial(steps: StepSet, x, y):
    """The step polynomial S(x, y) = Σ x^i y^j."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return sum(x**i * y**j for i, j in steps.steps)


class Classification(MSONable):
    """Classification of a step set.

    Args:
        kind: One of "trivial", "half-plane-reducible", "singular" or
            "non-singular".
        group_order: The order of the group of the walk. None if not computed,
            "exceeds-bound" if no finite order was found within the bound.
    """

    kinds = ("trivial", "half-plane-reducible", "singular", "non-singular")

    def __init__(self, kind: str, group_order=None):
        if kind not in self.kinds:
            raise ValueError(f"Unrecognised classification: {kind}")
        self.kind = kind
        self.group_order = group_order

    @property
    def finite_group(self) -> Optional[bool]:
        if self.group_order is None:
            return None
        return self.group_order != "exceeds-bound"


def classify(steps: StepSet, bound: int = 60, seed: int = 0) -> Classification:
    """Classify a step set.

    The classes are tested in the order trivial, half-plane-reducible,
    singular and non-singular. Trivial sets either cannot leave the origin, or
    never move in one of the two positive directions so that the walk is
    confined to an axis. Half-plane-reducible sets have one of the quadrant
    constraints inactive. Singular sets contain none of W, SW and S.

    Args:
        steps: The step set.
        bound: Largest group order considered.
        seed: Seed used to sample the points for the group order detection.

    Returns:
        The classification. The group order is only computed for non-singular
        step sets.
    """
    upper = {(0, 1), (1, 1), (1, 0)}
    in_upper = [s in upper for s in steps.steps]
    if all(in_upper) or not any(in_upper):
        return Classification("trivial")

    if not any(i == 1 for i, _ in steps.steps) or not any(
        j == 1 for _, j in steps.steps
    ):
        return Classification("trivial")

    if all(i >= 0 for i, _ in steps.steps) or all(j >= 0 for _, j in steps.steps):
        return Classification("half-plane-reducible")

    if not any(s in steps.steps for s in ((-1, 0), (-1, -1), (0, -1))):
        return Classification("singular")

    return Classification("non-singular", group_order(steps, bound=bound, seed=seed))


def _laurent_part(steps: StepSet, axis: int, value: int):
    """Coefficients of the Laurent polynomial Σ t^k over steps with given component.

    For axis=1 returns the x-polynomial of the steps with j == value, for
    axis=0 the y-polynomial of steps with i == value. Coefficients are stored
    for powers (-1, 0, 1).
    """
    coeffs = np.zeros(3)
    for step in steps.steps:
        if step[axis] == value:
            coeffs[step[1 - axis] + 1] += 1
    return coeffs


def _eval_laurent(coeffs, t):
    return coeffs[0] / t + coeffs[1] + coeffs[2] * t


def group_generators(steps: StepSet):
    """Get the two involutions ξ and η generating the group of the walk.

    ξ(x, y) = (x, A₋(x) / (y A₊(x))) and η(x, y) = (B₋(y) / (x B₊(y)), y).

    Returns:
        The functions (xi, eta), each mapping a pair (x, y) to a new pair.
    """
    a_minus = _laurent_part(steps, 1, -1)
    a_plus = _laurent_part(steps, 1, 1)
    b_minus = _laurent_part(steps, 0, -1)
    b_plus = _laurent_part(steps, 0, 1)

    if not all(p.any() for p in (a_minus, a_plus, b_minus, b_plus)):
        raise ValueError(f"Degenerate group generators for step set {steps}")

    def xi(x, y):
        return x, _eval_laurent(a_minus, x) / (y * _eval_laurent(a_plus, x))

    def eta(x, y):
        return _eval_laurent(b_minus, y) / (x * _eval_laurent(b_plus, y)), y

    return xi, eta


def group_order(steps: StepSet, bound: int = 60, seed: int = 0, n_points: int = 3):
    """Determine the order of the group of the walk.

    The order is 2m for the smallest m such that (η ∘ ξ)^m fixes generic points.
    The detection is performed on several random points which must all agree.

    Args:
        steps: The step set.
        bound: Largest order considered.
        seed: The random seed.
        n_points: The number of random points.

    Returns:
        The group order, or "exceeds-bound" if no order up to bound was found.
    """
    xi, eta = group_generators(steps)
    rng = np.random.default_rng(seed)
    points = rng.uniform(0.5, 1.5, (n_points, 2)) * np.exp(
        2j * np.pi * rng.uniform(0, 1, (n_points, 2))
    )

    orders = []
    for x0, y0 in points:
        x, y = x0, y0
        order = None
        with np.errstate(all="ignore"):
            for m in range(1, bound // 2 + 1):
                x, y = eta(*xi(x, y))
                if not (np.isfinite(x) and np.isfinite(y)):
                    break
                if abs(x - x0) <= group_tol * (1 + abs(x0)) and abs(
                    y - y0
                ) <= group_tol * (1 + abs(y0)):
                    order = 2 * m
                    break
        orders.append(order)

    if all(o is None for o in orders):
        return "exceeds-bound"

    if len(set(orders)) != 1:
        raise RuntimeError(f"Group order detection disagrees between points: {orders}")

    logger.debug(f"Group order of {steps}: {orders[0]}")
    return orders[0]


def check_functional_equation(
    steps: StepSet,
    z: float,
    depth: int,
    n_samples: int = 5,
    seed: int = 0,
    table=None,
) -> float:
    """Check the kernel functional equation on the enumerated counts.

    The check is performed coefficient-wise in z, where both sides are exact
    polynomials in x and y, at random points in the closed unit polydisk.

    Args:
        steps: The step set.
        z: The step weight.
        depth: The walk length N of the count table.
        n_samples: The number of random (x, y) samples.
        seed: The random seed.
        table: A precomputed :obj:`qwalk.walk.oracle.CountTable`.

    Returns:
        The maximum residual of the functional equation over the samples.
    """
    from qwalk.walk.oracle import count

    if table is None:
        table = count(steps, depth)

    q = table.as_float()
    d = steps.delta
    n = np.arange(depth + 1)
    zp = z**n

    rng = np.random.default_rng(seed)
    radii = np.sqrt(rng.uniform(0, 1, (n_samples, 2)))
    angles = np.exp(2j * np.pi * rng.uniform(0, 1, (n_samples, 2)))
    samples = radii * angles

    residuals = []
    for x, y in samples:
        xp = x ** np.arange(depth + 1)
        yp = y ** np.arange(depth + 1)
        qn = np.einsum("ijn,i,j->n", q, xp, yp)
        qx0 = np.einsum("in,i->n", q[:, 0, :], xp)
        q0y = np.einsum("jn,j->n", q[0, :, :], yp)
        q00 = q[0, 0, :]

        xys = x * y * step_polynomial(steps, x, y)
        cx = d[-1, -1] + d[0, -1] * x + d[1, -1] * x**2
        dy = d[-1, -1] + d[-1, 0] * y + d[-1, 1] * y**2

        lhs = -x * y * qn
        lhs[1:] += xys * qn[:-1]
        rhs = np.zeros(depth + 1, dtype=complex)
        rhs[0] = -x * y
        rhs[1:] = cx * qx0[:-1] + dy * q0y[:-1] - d[-1, -1] * q00[:-1]
        residuals.append(abs(np.sum(zp * (lhs - rhs))))

    return float(max(residuals))
