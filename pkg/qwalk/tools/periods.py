"""
This module contains the periods and rationality commands.
"""

import click
from click import option

from qwalk.tools.common import (
    emit,
    emit_text,
    exit_on_error,
    format_type,
    ratio_type,
    run_config,
    steps_type,
)
from qwalk.util import parse_z_grid

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"


@click.command()
@option("-s", "--steps", type=steps_type, required=True, help='step set (e.g. "NE,W,S")')
@option("-z", "--z", type=float, help="step weight in (0, 1/|S|)")
@option("-p", "--pin-ratio", type=ratio_type, help='pin ω₃/ω₂ (e.g. "2/3")')
@option("-o", "--output", help="output file [default: stdout]")
@exit_on_error("periods")
def periods(steps, z, pin_ratio, output):
    """
    Compute the branch points and periods of the kernel curve
    """
    from qwalk.constants import defaults
    from qwalk.elliptic.curve import curve_data
    from qwalk.elliptic.rationality import detect_ratio
    from qwalk.elliptic.uniformization import periods as curve_periods
    from qwalk.io import make_report

    inputs = run_config(steps, z, pin_ratio)

    curve = curve_data(steps, inputs["z"])
    result = curve_periods(curve)
    ratio = detect_ratio(result, l_max=defaults["l_max"], tol=defaults["ratio_tol"])

    results = {
        "x_branch_points": [_branch(b) for b in curve.x_branch],
        "y_branch_points": [_branch(b) for b in curve.y_branch],
        "w1": result.w1,
        "w2": result.w2,
        "w3": result.w3,
        "ratio": result.ratio,
        "rational": list(ratio.fraction) if ratio.detected else None,
    }
    diagnostics = {"ratio_tol": defaults["ratio_tol"]}
    emit(make_report("periods", inputs, results, diagnostics), output)


@click.command()
@option("-s", "--steps", type=steps_type, required=True, help='step set (e.g. "NE,W,S")')
@option(
    "-z",
    "--z-grid",
    metavar="Z",
    type=parse_z_grid,
    help='step weights (e.g. "0.1,0.2" or "0.05:0.3:6")',
)
@option("-p", "--pin-ratio", type=ratio_type, help='find the z with ω₃/ω₂ = k/l')
@option("--l-max", type=int, help="largest denominator")
@option("--ratio-tol", type=float, help="rationality tolerance")
@option("--nworkers", type=int, help="number of processors to use")
@option("-f", "--format", "fmt", type=format_type, default="json", help="output format")
@option("-o", "--output", help="output file [default: stdout]")
@exit_on_error("rationality")
def rationality(steps, z_grid, pin_ratio, l_max, ratio_tol, nworkers, fmt, output):
    """
    Detect rational period ratios ω₃/ω₂ on a grid of step weights
    """
    from tabulate import tabulate

    from qwalk.constants import defaults
    from qwalk.elliptic.rationality import pin_ratio as pin, scan_ratios
    from qwalk.io import make_report

    if (z_grid is None) == (pin_ratio is None):
        raise click.BadParameter("exactly one of --z-grid and --pin-ratio is required")

    l_max = defaults["l_max"] if l_max is None else l_max
    ratio_tol = defaults["ratio_tol"] if ratio_tol is None else ratio_tol
    nworkers = defaults["nworkers"] if nworkers is None else nworkers
    inputs = {"steps": str(steps), "l_max": l_max, "ratio_tol": ratio_tol}

    if pin_ratio is not None:
        k, l = pin_ratio  # noqa: E741
        inputs["pin_ratio"] = f"{k}/{l}"
        z_grid = [pin(steps, k, l)]
    else:
        for z in z_grid:
            run_config(steps, float(z), None)
        inputs["z_grid"] = [float(z) for z in z_grid]

    scan = scan_ratios(steps, z_grid, l_max=l_max, tol=ratio_tol, nworkers=nworkers)

    if fmt == "table":
        rows = [(r.z, r.ratio, str(r)) for r in scan]
        text = tabulate(
            rows, headers=("z", "ω₃/ω₂", "rational"), floatfmt=(".10g", ".12f", "")
        )
        emit_text(text + "\n", output)
        return

    results = {
        "scan": [
            {
                "z": r.z,
                "ratio": r.ratio,
                "k": r.k,
                "l": r.l,
                "error": r.error,
            }
            for r in scan
        ]
    }
    emit(make_report("rationality", inputs, results), output)


def _branch(value):
    # infinite branch points are written as null
    return None if value is None or not abs(value) < float("inf") else float(value)
