"""
This module contains the classify and count commands.
"""

import click
from click import option

from qwalk.tools.common import (
    csv_text,
    emit,
    emit_text,
    exit_on_error,
    format_type,
    steps_type,
)

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"


@click.command()
@option("-s", "--steps", type=steps_type, required=True, help='step set (e.g. "NE,W,S")')
@option("--group-bound", type=int, help="largest group order considered")
@option("--seed", type=int, help="random seed for the group order detection")
@option("-o", "--output", help="output file [default: stdout]")
@exit_on_error("classify")
def classify(steps, group_bound, seed, output):
    """
    Classify a step set and find the order of its group
    """
    from qwalk.constants import defaults
    from qwalk.io import make_report
    from qwalk.walk.stepset import classify as classify_steps

    bound = defaults["group_bound"] if group_bound is None else group_bound
    seed = defaults["seed"] if seed is None else seed

    result = classify_steps(steps, bound=bound, seed=seed)
    inputs = {"steps": str(steps), "group_bound": bound, "seed": seed}
    results = {"kind": result.kind, "group_order": result.group_order}
    emit(make_report("classify", inputs, results), output)


@click.command()
@option("-s", "--steps", type=steps_type, required=True, help='step set (e.g. "E,W,N,S")')
@option("-d", "--depth", type=int, help="largest walk length")
@option("--csv", "as_csv", is_flag=True, help="write all non-zero counts as csv")
@option("-f", "--format", "fmt", type=format_type, default="json", help="output format")
@option("-o", "--output", help="output file [default: stdout]")
@exit_on_error("count")
def count(steps, depth, as_csv, fmt, output):
    """
    Count quarter-plane walks by length and endpoint
    """
    from tabulate import tabulate

    from qwalk.constants import defaults
    from qwalk.io import make_report
    from qwalk.walk.oracle import count as count_walks

    depth = defaults["depth"] if depth is None else depth
    if depth < 0:
        raise ValueError(f"Walk depth must be non-negative, got {depth}")

    table = count_walks(steps, depth)

    if as_csv:
        emit_text(csv_text(table), output)
        return

    excursions = [table.q(0, 0, n) for n in range(depth + 1)]
    totals = [table.total(n) for n in range(depth + 1)]

    if fmt == "table":
        rows = [(n, excursions[n], totals[n]) for n in range(depth + 1)]
        text = tabulate(rows, headers=("n", "q(0,0;n)", "q(n)"), numalign="right")
        emit_text(text + "\n", output)
        return

    inputs = {"steps": str(steps), "depth": depth}
    results = {"excursions": excursions, "totals": totals}
    emit(make_report("count", inputs, results), output)
