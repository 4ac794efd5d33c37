"""
This module contains the verify command.
"""

import click
from click import option

from qwalk.tools.common import (
    emit,
    exit_on_error,
    ordering_type,
    ratio_type,
    steps_type,
)

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"


@click.command()
@option("-s", "--steps", type=steps_type, required=True, help='step set (e.g. "NE,W,S")')
@option("-z", "--z", type=float, help="step weight in (0, 1/|S|)")
@option("-p", "--pin-ratio", type=ratio_type, help='pin ω₃/ω₂ (e.g. "1/3")')
@option("-d", "--depth", type=int, help="walk length of the enumeration")
@option("-t", "--tol", type=float, help="tolerance of the comparisons")
@option("--seed", type=int, help="random seed of the sampled checks")
@option("--n-samples", type=int, help="number of random samples per check")
@option("--series-ordering", type=ordering_type, help="summation order of the series")
@option("--series-tol", type=float, help="target accuracy of the series")
@option("--settings", help="path to settings file")
@option("--directory", help="write the report, settings and log to this directory")
@option("-o", "--output", help="output file [default: stdout]")
@option("--print-log/--no-log", default=False, help="whether to print log messages")
@option("--write-log/--no-write-log", default=None, help="write the log to file")
@exit_on_error("verify")
def verify(**kwargs):
    """
    Cross-check the series, the continuation and the exact counts
    """
    from qwalk.constants import defaults
    from qwalk.core.run import Verifier

    steps = kwargs["steps"]
    z, pin = kwargs["z"], kwargs["pin_ratio"]
    if z is not None and pin is not None:
        raise click.BadParameter("--z and --pin-ratio are mutually exclusive")
    if z is None and pin is None:
        raise click.BadParameter("one of --z and --pin-ratio is required")

    settings_override = {}
    for setting in defaults:
        if setting in kwargs and kwargs[setting] is not None:
            settings_override[setting] = kwargs[setting]

    if kwargs["settings"]:
        verifier = Verifier.from_directory(
            steps=steps,
            z=z,
            ratio=pin,
            settings_file=kwargs["settings"],
            settings_override=settings_override,
        )
    else:
        verifier = Verifier(steps, z=z, settings=settings_override, ratio=pin)

    report = verifier.run(directory=kwargs["directory"])
    emit(verifier.to_report(report), kwargs["output"])

    if not report["passed"]:
        failed = [c["name"] for c in report["checks"] if c["status"] == "failed"]
        exception = click.ClickException(
            "tolerance breached in: " + ", ".join(failed)
        )
        exception.exit_code = 1
        raise exception
