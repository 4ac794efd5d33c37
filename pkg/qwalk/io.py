"""
Module defining io functions.
"""

import csv
import json
from pathlib import Path
from typing import Any, Dict, Optional, TextIO, Union

from monty.serialization import dumpfn, loadfn

from qwalk.util import cast_dict_list, logger, validate_settings

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"


def write_settings(settings: Dict[str, Any], filename: str):
    """Write qwalk configuration settings to a formatted yaml file.

    Args:
        settings: The configuration settings.
        filename: A filename.
    """
    settings = cast_dict_list(settings)
    dumpfn(settings, filename)


def load_settings(filename: str) -> Dict[str, Any]:
    """Load qwalk configuration settings from a yaml file.

    If the settings file does not contain a required parameter, the default
    value will be added to the configuration.

    Args:
        filename: Path to settings file.

    Returns:
        The settings, with any missing values set according to the qwalk defaults.
    """
    logger.info(f"Loading settings from: {filename}")
    settings = loadfn(filename)

    return validate_settings(settings)


def make_report(
    command: str,
    inputs: Dict[str, Any],
    results: Dict[str, Any],
    diagnostics: Optional[Dict[str, Any]] = None,
) -> Dict[str, Any]:
    """Assemble a machine-readable report.

    Complex numbers are stored as [re, im] pairs. Floats are written with the
    shortest representation that round-trips exactly.

    Args:
        command: The name of the command that produced the results.
        inputs: The inputs, including the random seed where relevant.
        results: The results.
        diagnostics: Optional diagnostic information (tolerances, tail bounds).

    Returns:
        The report as a json-serializable dictionary.
    """
    import mpmath
    import numpy
    import scipy

    from qwalk import __version__
    from qwalk.constants import schema_version

    report = {
        "schema": schema_version,
        "command": command,
        "inputs": inputs,
        "results": results,
        "diagnostics": diagnostics or {},
        "versions": {
            "qwalk": __version__,
            "numpy": numpy.__version__,
            "scipy": scipy.__version__,
            "mpmath": mpmath.__version__,
        },
    }
    return cast_dict_list(report)


def report_to_json(report: Dict[str, Any]) -> str:
    return json.dumps(cast_dict_list(report), indent=2)


def write_report(report: Dict[str, Any], filename: Union[str, Path]):
    """Write a report to a json or yaml file, determined by the file extension."""
    dumpfn(cast_dict_list(report), str(filename))


def write_counts_csv(table, filename: Union[str, Path, TextIO]):
    """Write the exact walk counts in csv format.

    Only non-zero counts are written, one row per (i, j, n).

    Args:
        table: A :obj:`qwalk.walk.oracle.CountTable`.
        filename: The output filename or an open text stream.
    """
    if hasattr(filename, "write"):
        _write_counts(table, filename)
        return

    with open(filename, "w", newline="") as f:
        _write_counts(table, f)
    logger.info(f"Counts written to: {filename}")


def _write_counts(table, stream: TextIO):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["i", "j", "n", "count"])
    for (i, j, n), count in table.nonzero_items():
        writer.writerow([i, j, n, count])
