import functools
import io
from typing import Any, Dict, Optional

import click

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

ordering_type = click.Choice(["rows", "columns"], case_sensitive=False)
format_type = click.Choice(["json", "table"], case_sensitive=False)
example_type = click.Choice(["kreweras", "srw", "infinite"], case_sensitive=False)
which_type = click.Choice(["x", "y"], case_sensitive=False)
method_type = click.Choice(["series", "continuation"], case_sensitive=False)

_exit_codes = {ValueError: 2, RuntimeError: 3}


class StepSetType(click.ParamType):
    name = "steps"

    def convert(self, value, param, ctx):
        from qwalk.walk.stepset import StepSet, parse_stepset

        if isinstance(value, StepSet):
            return value
        try:
            return parse_stepset(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)


class RatioType(click.ParamType):
    name = "k/l"

    def convert(self, value, param, ctx):
        from qwalk.util import parse_ratio

        if isinstance(value, tuple):
            return value
        try:
            return parse_ratio(value)
        except ValueError as e:
            self.fail(str(e), param, ctx)


class ComplexType(click.ParamType):
    name = "complex"

    def convert(self, value, param, ctx):
        if isinstance(value, complex):
            return value
        try:
            return complex(str(value).replace(" ", "").replace("i", "j"))
        except ValueError:
            self.fail(f"Unrecognised complex number: {value}", param, ctx)


steps_type = StepSetType()
ratio_type = RatioType()
complex_type = ComplexType()


def run_config(
    steps, z: Optional[float], pin: Optional[tuple], require_z: bool = True
) -> Dict[str, Any]:
    """Check the step weight options and return the matching inputs.

    Exactly one of z and the pinned ratio may be given. If the ratio is pinned,
    the weight is found such that ω₃/ω₂ = k/l.
    """
    from qwalk.elliptic.rationality import pin_ratio
    from qwalk.util import check_z

    if z is not None and pin is not None:
        raise click.BadParameter("--z and --pin-ratio are mutually exclusive")

    if pin is not None:
        z = pin_ratio(steps, *pin)
    elif z is None:
        if require_z:
            raise click.BadParameter("one of --z and --pin-ratio is required")
        return {"steps": str(steps), "z": None, "pin_ratio": None}

    try:
        check_z(z, steps.size)
    except ValueError as e:
        raise click.BadParameter(str(e))

    return {
        "steps": str(steps),
        "z": float(z),
        "pin_ratio": None if pin is None else f"{pin[0]}/{pin[1]}",
    }


def emit(report: Dict[str, Any], output: Optional[str]):
    """Write a report as json to a file, or to stdout if no file is given."""
    from qwalk.io import report_to_json

    text = report_to_json(report)
    if output:
        with open(output, "w") as f:
            f.write(text + "\n")
    else:
        click.echo(text)


def emit_text(text: str, output: Optional[str]):
    if output:
        with open(output, "w", newline="") as f:
            f.write(text)
    else:
        click.echo(text, nl=False)


def csv_text(table) -> str:
    from qwalk.io import write_counts_csv

    stream = io.StringIO()
    write_counts_csv(table, stream)
    return stream.getvalue()


def exit_on_error(command_name: str):
    """Map errors to exit codes.

    ValueError gives exit code 2 and RuntimeError gives exit code 3. A json
    document with the error is written to stdout (or the --output file) before
    exiting.
    """

    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            try:
                return func(*args, **kwargs)
            except (ValueError, RuntimeError) as e:
                from qwalk.io import make_report

                code = next(c for t, c in _exit_codes.items() if isinstance(e, t))
                inputs = {k: _plain(v) for k, v in kwargs.items()}
                diagnostics = {"error": type(e).__name__, "message": str(e)}
                emit(
                    make_report(command_name, inputs, None, diagnostics),
                    kwargs.get("output"),
                )
                exception = click.ClickException(str(e))
                exception.exit_code = code
                raise exception

        return wrapper

    return decorator


def _plain(value):
    if isinstance(value, (str, int, float, bool, type(None))):
        return value
    if isinstance(value, tuple):
        return list(value)
    return str(value)
