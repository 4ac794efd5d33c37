"""
Exact enumeration of quarter-plane walks by dynamic programming.

The counts q(i, j; n) of walks of length n from the origin to (i, j) that stay
in the quarter plane are exact (arbitrary precision integers) and serve as
ground truth for all analytic evaluations.
"""

import logging
from functools import lru_cache
from typing import Iterator, Tuple, Union

import numpy as np
from monty.json import MSONable

from qwalk.util import get_progress_bar
from qwalk.walk.stepset import StepSet

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

_axes = ("x-axis", "y-axis", "origin")


class CountTable(MSONable):
    """Exact walk counts indexed as counts[i, j, n].

    Args:
        steps: The step set.
        counts: Object array of python integers with shape (N+1, N+1, N+1).
    """

    def __init__(self, steps: StepSet, counts: np.ndarray):
        self.steps = steps
        self.counts = counts

    @property
    def depth(self) -> int:
        return self.counts.shape[2] - 1

    def q(self, i: int, j: int, n: int) -> int:
        if n > self.depth:
            raise ValueError(f"Walk length {n} exceeds table depth {self.depth}")
        if i < 0 or j < 0 or i > n or j > n:
            return 0
        return int(self.counts[i, j, n])

    def total(self, n: int) -> int:
        """Number of quarter-plane walks of length n with any endpoint."""
        return int(self.counts[:, :, n].sum())

    def as_float(self) -> np.ndarray:
        return self.counts.astype(np.float64)

    def nonzero_items(self) -> Iterator[Tuple[Tuple[int, int, int], int]]:
        for n in range(self.depth + 1):
            for i in range(n + 1):
                for j in range(n + 1):
                    value = self.counts[i, j, n]
                    if value:
                        yield (i, j, n), int(value)

    def as_dict(self):
        return {
            "@module": self.__class__.__module__,
            "@class": self.__class__.__name__,
            "steps": self.steps.as_dict(),
            "counts": [[i, j, n, str(c)] for (i, j, n), c in self.nonzero_items()],
            "depth": self.depth,
        }

    @classmethod
    def from_dict(cls, d):
        depth = d["depth"]
        counts = np.zeros((depth + 1,) * 3, dtype=object)
        for i, j, n, c in d["counts"]:
            counts[i, j, n] = int(c)
        return cls(StepSet.from_dict(d["steps"]), counts)


def count(steps: StepSet, depth: int, progress_bar: bool = False) -> CountTable:
    """Count quarter-plane walks up to a given length.

    Args:
        steps: The step set.
        depth: The maximum walk length N.
        progress_bar: Whether to show a progress bar.

    Returns:
        The exact count table.
    """
    if depth < 0:
        raise ValueError(f"Walk depth must be non-negative, got {depth}")

    if progress_bar:
        return _count(steps, depth, True)
    return _cached_count(steps, depth)


@lru_cache(maxsize=16)
def _cached_count(steps: StepSet, depth: int) -> CountTable:
    return _count(steps, depth, False)


def _count(steps: StepSet, depth: int, progress_bar: bool) -> CountTable:
    size = depth + 1
    counts = np.zeros((size, size, size), dtype=object)
    counts[0, 0, 0] = 1

    lengths = range(1, size)
    if progress_bar and depth > 0:
        lengths = get_progress_bar(lengths, desc="counting")

    for n in lengths:
        old = counts[:, :, n - 1]
        new = np.zeros((size, size), dtype=object)
        for a, b in steps.steps:
            new[max(0, a) : size + min(0, a), max(0, b) : size + min(0, b)] += old[
                max(0, -a) : size - max(0, a), max(0, -b) : size - max(0, b)
            ]
        counts[:, :, n] = new

    return CountTable(steps, counts)


def truncation_bound(steps: StepSet, x, y, z: float, depth: int) -> float:
    """Bound on the tail of the generating function beyond length N.

    Uses ρ = |S| z max(|x|, 1) max(|y|, 1) and the bound ρ^(N+1) / (1 - ρ).

    Returns:
        The tail bound, or infinity if ρ ≥ 1.
    """
    rho = steps.size * abs(z) * max(abs(x), 1) * max(abs(y), 1)
    if rho >= 1:
        logger.warning(
            f"Truncated generating function diverges (ρ = {rho:.3f} ≥ 1), "
            "no tail bound available"
        )
        return np.inf
    return rho ** (depth + 1) / (1 - rho)


def q_truncated(
    walks: Union[StepSet, CountTable],
    x,
    y,
    z: float,
    depth: int = None,
    return_bound: bool = False,
):
    """Evaluate the truncated generating function Σ_{n≤N} q(i, j; n) x^i y^j z^n.

    Args:
        walks: A step set or a precomputed count table.
        x: The x value.
        y: The y value.
        z: The step weight.
        depth: The truncation length N. Defaults to the table depth when a count
            table is given.
        return_bound: Whether to also return the tail bound.

    Returns:
        The truncated generating function, and optionally the tail bound.
    """
    table = _get_table(walks, depth)
    depth = table.depth if depth is None else depth

    powers = np.arange(depth + 1)
    q = table.as_float()[: depth + 1, : depth + 1, : depth + 1]
    value = np.einsum(
        "ijn,i,j,n->",
        q,
        complex(x) ** powers,
        complex(y) ** powers,
        float(z) ** powers,
    )

    if return_bound:
        return value, truncation_bound(table.steps, x, y, z, depth)
    return value


def boundary_gf(
    walks: Union[StepSet, CountTable], axis: str, var, z: float, depth: int = None
):
    """Evaluate a truncated boundary generating function.

    Args:
        walks: A step set or a precomputed count table.
        axis: "x-axis" for Q(var, 0), "y-axis" for Q(0, var) or "origin" for
            Q(0, 0) (var is ignored).
        var: The value(s) of the free variable; arrays are supported.
        z: The step weight.
        depth: The truncation length N.

    Returns:
        The truncated boundary generating function.
    """
    if axis not in _axes:
        raise ValueError(f"Unrecognised axis: {axis} (choose from {_axes})")

    table = _get_table(walks, depth)
    depth = table.depth if depth is None else depth
    q = table.as_float()[: depth + 1, : depth + 1, : depth + 1]
    zp = float(z) ** np.arange(depth + 1)

    if axis == "origin":
        return complex(np.dot(q[0, 0, :], zp))

    coeffs = q[:, 0, :] if axis == "x-axis" else q[0, :, :]
    series = coeffs @ zp
    var = np.asarray(var, dtype=complex)
    return np.polynomial.polynomial.polyval(var, series)


def _get_table(walks: Union[StepSet, CountTable], depth: int = None) -> CountTable:
    if isinstance(walks, CountTable):
        if depth is not None and depth > walks.depth:
            raise ValueError(f"Depth {depth} exceeds table depth {walks.depth}")
        return walks

    if depth is None:
        raise ValueError("A depth is required when counting from a step set")
    return count(walks, depth)
