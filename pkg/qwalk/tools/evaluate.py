"""
This module contains the evaluate command.
"""

import click
from click import option

from qwalk.tools.common import (
    complex_type,
    emit,
    exit_on_error,
    method_type,
    ordering_type,
    ratio_type,
    run_config,
    steps_type,
)

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"


@click.command()
@option("-s", "--steps", type=steps_type, required=True, help='step set (e.g. "NE,W,S")')
@option("-z", "--z", type=float, help="step weight in (0, 1/|S|)")
@option("-p", "--pin-ratio", type=ratio_type, help='pin ω₃/ω₂ (e.g. "1/3")')
@option("-w", "--omega", type=complex_type, help='point ω (e.g. "0.4+0.1j")')
@option("-x", "--x0", type=complex_type, help="evaluate Q(x0, 0)")
@option("-y", "--y0", type=complex_type, help="evaluate Q(0, y0)")
@option("-b", "--branch", type=int, default=1, help="preimage branch for x0 or y0")
@option(
    "-m",
    "--method",
    type=method_type,
    default="series",
    help="series, or continuation from the enumerated counts",
)
@option("--series-ordering", type=ordering_type, help="summation order of the series")
@option("--series-tol", type=float, help="target accuracy of the series")
@option("-d", "--depth", type=int, help="walk length of the enumeration")
@option("-o", "--output", help="output file [default: stdout]")
@exit_on_error("evaluate")
def evaluate(
    steps,
    z,
    pin_ratio,
    omega,
    x0,
    y0,
    branch,
    method,
    series_ordering,
    series_tol,
    depth,
    output,
):
    """
    Evaluate the boundary functions r_x, r_y and Q(0, 0)
    """
    from qwalk.continuation.continuation import r_x_continued, r_y_continued
    from qwalk.continuation.series import SeriesConfig, SeriesSolution
    from qwalk.elliptic.curve import curve_data
    from qwalk.elliptic.rationality import detect_ratio
    from qwalk.elliptic.uniformization import uniformize
    from qwalk.io import make_report
    from qwalk.util import validate_settings
    from qwalk.walk.oracle import boundary_gf, count, truncation_bound

    overrides = {"series_ordering": series_ordering, "series_tol": series_tol}
    overrides["depth"] = depth
    settings = validate_settings({k: v for k, v in overrides.items() if v is not None})

    inputs = run_config(steps, z, pin_ratio)
    inputs.update(
        {
            "omega": omega,
            "x0": x0,
            "y0": y0,
            "branch": branch,
            "method": method,
        }
    )
    z = inputs["z"]
    U = uniformize(curve_data(steps, z))
    results = {}
    diagnostics = {}

    if method == "continuation":
        inputs["depth"] = settings["depth"]
        table = count(steps, settings["depth"])
        if omega is not None:
            results["r_x"] = r_x_continued(U, table, omega)
            results["r_y"] = r_y_continued(U, table, omega)
        q00 = boundary_gf(table, "origin", 0, z)
        results["q00"] = q00.real
        diagnostics["tail_bound"] = truncation_bound(steps, 0, 0, z, settings["depth"])
        if x0 is not None:
            results["qx0"] = complex(boundary_gf(table, "x-axis", x0, z))
        if y0 is not None:
            results["q0y"] = complex(boundary_gf(table, "y-axis", y0, z))
        emit(make_report("evaluate", inputs, results, diagnostics), output)
        return

    ratio = detect_ratio(U.periods, l_max=settings["l_max"], tol=settings["ratio_tol"])
    if not ratio.detected:
        raise ValueError(
            f"ω₃/ω₂ = {U.periods.ratio:.12g} is not rational with denominator "
            f"at most {settings['l_max']}; use --pin-ratio or --method continuation"
        )

    config = SeriesConfig.from_settings(settings)
    solution = SeriesSolution(U, ratio.k, ratio.l, config)
    inputs["series_ordering"] = config.ordering
    inputs["series_tol"] = config.tol

    if omega is not None:
        result = solution.evaluate(omega, "y")
        results["r_y"] = solution.r_y(omega)
        results["r_x"] = solution.r_x(omega)
        diagnostics["est_tail"] = result.est_tail
        diagnostics["terms_used"] = result.terms_used

    results["k00q00"] = solution.k00q00
    results["q00"] = solution.q00()
    if x0 is not None:
        results["qx0"] = solution.q_x0(x0, branch)
    if y0 is not None:
        results["q0y"] = solution.q_0y(y0, branch)

    diagnostics["ratio"] = f"{ratio.k}/{ratio.l}"
    diagnostics["anchor_spread"] = solution.anchors["consistency"]
    emit(make_report("evaluate", inputs, results, diagnostics), output)
