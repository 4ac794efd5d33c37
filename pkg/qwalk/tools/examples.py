"""
This module contains the examples command, which runs the worked models.
"""

import click
from click import argument, option

from qwalk.tools.common import emit, example_type, exit_on_error

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

_default_z = {"kreweras": 0.1, "srw": 0.15}


@click.command()
@argument("model", type=example_type)
@option("-z", "--z", type=float, help="step weight (not used by the infinite model)")
@option("-d", "--depth", type=int, help="walk length of the enumeration")
@option("-o", "--output", help="output file [default: stdout]")
@exit_on_error("examples")
def examples(model, z, depth, output):
    """
    Run a worked model: kreweras, srw (simple walk) or infinite
    """
    from qwalk.constants import defaults
    from qwalk.io import make_report

    depth = defaults["depth"] if depth is None else depth
    runner = {"kreweras": _kreweras, "srw": _simple, "infinite": _infinite}[model]
    z = _default_z.get(model) if z is None else z
    inputs, results, diagnostics = runner(z, depth)
    inputs.update({"model": model, "depth": depth})
    emit(make_report("examples", inputs, results, diagnostics), output)


def _kreweras(z, depth):
    from qwalk.continuation.series import SeriesSolution
    from qwalk.models.kreweras import (
        constants_check,
        kreweras_steps,
        kreweras_uniformization,
        q00_closed,
        q00_from_r,
        q00_from_wp12,
    )
    from qwalk.util import check_z
    from qwalk.walk.oracle import boundary_gf, count, truncation_bound

    check_z(z, kreweras_steps.size)
    U = kreweras_uniformization(z)
    table = count(kreweras_steps, depth)
    solution = SeriesSolution(U, 2, 3)

    results = {
        "ratio": U.periods.ratio,
        "q00": {
            "closed": q00_closed(z),
            "oracle": boundary_gf(table, "origin", 0, z).real,
            "series": solution.q00(),
            "wp12": q00_from_wp12(U),
            "cubic_root": q00_from_r(z),
        },
    }
    diagnostics = {
        "oracle_tail": truncation_bound(kreweras_steps, 0, 0, z, depth),
        "constants_residuals": constants_check(U),
    }
    return {"steps": str(kreweras_steps), "z": z}, results, diagnostics


def _simple(z, depth):
    import numpy as np

    from qwalk.continuation.poles import fy_poles
    from qwalk.continuation.series import SeriesSolution
    from qwalk.elliptic.curve import curve_data
    from qwalk.elliptic.uniformization import uniformize
    from qwalk.models.simple import (
        expected_fy_poles,
        simple_steps,
        srw_phi_decomposition,
    )
    from qwalk.util import check_z
    from qwalk.walk.oracle import boundary_gf, count

    check_z(z, simple_steps.size)
    U = uniformize(curve_data(simple_steps, z))
    found = fy_poles(U)
    expected = expected_fy_poles(U)
    pole_error = 0.0
    for e in expected:
        match = next(p for p in found if U.lattice.equivalent(p.pole, e.pole))
        error = abs(match.coeffs.get(2, 0) - e.coeffs[2]) / abs(e.coeffs[2])
        pole_error = max(pole_error, error)

    solution = SeriesSolution(U, 1, 2)
    points = np.array([0.3 * U.w2 + 0.1 * U.w1, 0.6 * U.w2 - 0.15 * U.w1])
    discrepancy = srw_phi_decomposition(U, solution.r_y, points)

    table = count(simple_steps, depth)
    results = {
        "ratio": U.periods.ratio,
        "fy_poles": [p.to_report() for p in found],
        "q00": {
            "oracle": boundary_gf(table, "origin", 0, z).real,
            "series": solution.q00(),
        },
        "phi_decomposition_constant": complex(discrepancy[0]),
    }
    diagnostics = {
        "pole_coefficient_error": pole_error,
        "phi_decomposition_spread": float(np.ptp(np.abs(discrepancy))),
    }
    return {"steps": str(simple_steps), "z": z}, results, diagnostics


def _infinite(z, depth):
    from qwalk.continuation.series import SeriesSolution
    from qwalk.elliptic.curve import curve_data
    from qwalk.elliptic.uniformization import uniformize
    from qwalk.models.infinite import infinite_steps, pinned_z, ratio_fraction
    from qwalk.walk.oracle import boundary_gf, count, truncation_bound

    pinned = ratio_fraction()
    if pinned is None:
        raise RuntimeError("No small-denominator ratio found for the infinite model")

    fraction, bracket = pinned
    k, l = fraction.numerator, fraction.denominator  # noqa: E741
    z = pinned_z(k, l, z_range=bracket)
    U = uniformize(curve_data(infinite_steps, z))
    solution = SeriesSolution(U, k, l)
    table = count(infinite_steps, depth)

    results = {
        "pinned_ratio": f"{k}/{l}",
        "z": z,
        "ratio": U.periods.ratio,
        "q00": {
            "oracle": boundary_gf(table, "origin", 0, z).real,
            "series": solution.q00(),
        },
    }
    diagnostics = {"oracle_tail": truncation_bound(infinite_steps, 0, 0, z, depth)}
    return {"steps": str(infinite_steps)}, results, diagnostics
