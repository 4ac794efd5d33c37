"""Module defining constants and default parameters."""

from importlib.resources import files

import numpy as np
from monty.serialization import loadfn

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

# compass names of the eight small steps
compass_steps = {
    "N": (0, 1),
    "NE": (1, 1),
    "E": (1, 0),
    "SE": (1, -1),
    "S": (0, -1),
    "SW": (-1, -1),
    "W": (-1, 0),
    "NW": (-1, 1),
}
step_names = {v: k for k, v in compass_steps.items()}

# row-major order over (i, j), used to canonicalize step sets
small_steps = tuple(
    (i, j) for i in (-1, 0, 1) for j in (-1, 0, 1) if (i, j) != (0, 0)
)

# numerical tolerances
group_tol = 1e-9
root_imag_tol = 1e-8
delta_margin = 1e-12
pole_refusal = 1e-6
large_val = 1e6  # values above this are treated as poles when locating zeros

output_width = 69
numeric_types = (float, int, np.integer, np.floating)
schema_version = 1

defaults = loadfn(str(files("qwalk") / "defaults.yaml"))
