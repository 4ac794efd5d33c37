"""
Settings validation, input parsing and report helpers.
"""

import copy
import logging
import math
import multiprocessing
import os
import sys
from typing import Any, Dict, Iterable, Mapping, Optional, Tuple

import numpy as np
from tqdm.auto import tqdm

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"


logger = logging.getLogger(__name__)

_bar_format = "{desc} {percentage:3.0f}%|{bar}| {elapsed}<{remaining}{postfix}"
_orderings = ("rows", "columns")


def validate_settings(user_settings: Dict[str, Any]) -> Dict[str, Any]:
    """Parse, validate and fill qwalk settings.

    Missing settings will be inferred from the qwalk defaults.

    Args:
        user_settings: A dictionary of settings.

    Returns:
        The validated settings.
    """
    from qwalk.constants import defaults

    settings = copy.deepcopy(defaults)
    settings.update(user_settings)

    for setting in settings:
        if setting not in defaults:
            raise ValueError(f"Unrecognised setting: {setting}")

    int_settings = (
        "depth",
        "l_max",
        "group_bound",
        "seed",
        "n_samples",
        "contour_points",
        "p_max",
        "n_max",
        "nworkers",
    )
    for int_setting in int_settings:
        settings[int_setting] = int(settings[int_setting])

    if settings["depth"] < 0:
        raise ValueError(f"Walk depth must be non-negative, got {settings['depth']}")

    for tol_setting in ("tol", "ratio_tol", "series_tol", "merge_tol"):
        settings[tol_setting] = float(settings[tol_setting])
        if settings[tol_setting] <= 0:
            raise ValueError(f"{tol_setting} must be positive")

    settings["series_ordering"] = str(settings["series_ordering"]).lower()
    if settings["series_ordering"] not in _orderings:
        raise ValueError(
            f"Unrecognised series ordering: {settings['series_ordering']} "
            f"(choose from {', '.join(_orderings)})"
        )

    return settings


def parse_ratio(ratio_str: str) -> Tuple[int, int]:
    """Parse a rational period ratio.

    Args:
        ratio_str: String of the form "k/l", e.g., "2/3".

    Returns:
        The ratio as a reduced tuple of (k, l) with 0 < k < l.
    """
    ratio_str = ratio_str.strip().replace(" ", "")

    try:
        parts = list(map(int, ratio_str.split("/")))
        if len(parts) != 2:
            raise ValueError

    except ValueError:
        raise ValueError(f"ERROR: Unrecognised ratio format: {ratio_str}")

    k, ell = parts
    if not 0 < k < ell:
        raise ValueError(f"ERROR: Ratio must satisfy 0 < k < l, got {ratio_str}")

    gcd = math.gcd(k, ell)
    return k // gcd, ell // gcd


def parse_z_grid(z_str: str) -> np.ndarray:
    """Parse a grid of step weights.

    Args:
        z_str: String giving the z values. Can be a list of comma separated
            numbers, or a range given as start:stop:num
            (i.e., "0.05:0.2:4" would give `[0.05, 0.1, 0.15, 0.2]`).

    Returns:
        The z values as a numpy array.
    """
    z_str = z_str.strip().replace(" ", "")

    try:
        if ":" in z_str:
            parts = list(map(float, z_str.split(":")))

            if len(parts) != 3:
                raise ValueError

            return np.linspace(parts[0], parts[1], int(parts[2]))

        else:
            return np.array(list(map(float, z_str.split(","))))

    except ValueError:
        raise ValueError(f"ERROR: Unrecognised z grid format: {z_str}")


def check_z(z: float, nsteps: int):
    """Check the step weight lies in the open interval (0, 1/|S|)."""
    if not 0 < z < 1 / nsteps:
        raise ValueError(f"z must lie in (0, 1/{nsteps}), got {z}")


def get_nworkers(nworkers: int = -1) -> int:
    """Get the number of worker processes.

    The value is capped by the QW_THREADS environment variable, if set.

    Args:
        nworkers: The requested number of workers. -1 means all processors.

    Returns:
        The number of workers to use.
    """
    if nworkers == -1:
        nworkers = multiprocessing.cpu_count()

    env_threads = os.environ.get("QW_THREADS")
    if env_threads:
        nworkers = min(nworkers, int(env_threads))

    return max(1, nworkers)


def complex_to_list(value: Any) -> Any:
    """Make a value JSON friendly.

    Complex numbers (also inside arrays, lists and mappings) become [re, im]
    pairs, numpy scalars become python scalars and mapping keys become strings.
    """
    if isinstance(value, Mapping):
        return {str(k): complex_to_list(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, (list, tuple)):
        return [complex_to_list(v) for v in value]
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, np.generic):
        return value.item()
    return value


def cast_dict_list(d: Optional[Mapping]) -> Optional[Dict[str, Any]]:
    """Cast a (nested) report dictionary with :func:`complex_to_list`."""
    return None if d is None else complex_to_list(d)


def get_progress_bar(
    iterable: Optional[Iterable] = None,
    total: Optional[int] = None,
    desc: str = "",
    min_desc_width: int = 18,
) -> tqdm:
    """Progress bar drawn as a branch of the log tree.

    Args:
        iterable: Items to iterate over.
        total: Number of items. Inferred from ``iterable`` when possible.
        desc: Label written before the bar.
        min_desc_width: The label is padded to at least this width.

    Returns:
        The progress bar.
    """
    from qwalk.constants import output_width

    if iterable is None and total is None:
        raise ValueError("A progress bar needs an iterable or a total")

    label = f"    ├── {desc}:".ljust(min_desc_width)
    return tqdm(
        iterable,
        total=total,
        desc=label,
        ncols=output_width,
        bar_format=_bar_format,
        file=sys.stdout,
    )
