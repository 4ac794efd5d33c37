"""
This module contains a script for using qwalk from the command line.
"""

import warnings

import click

from qwalk.tools.classify import classify, count
from qwalk.tools.evaluate import evaluate
from qwalk.tools.examples import examples
from qwalk.tools.periods import periods, rationality
from qwalk.tools.verify import verify

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

warnings.filterwarnings("ignore", category=RuntimeWarning, module="qwalk")
warnings.filterwarnings("ignore", category=FutureWarning, module="scipy")
warnings.filterwarnings("ignore", category=DeprecationWarning)


@click.group(context_settings=dict(help_option_names=["-h", "--help"]))
def cli():
    """
    qwalk computes generating functions of quarter-plane walks with small
    steps from the elliptic uniformization of the kernel curve
    """

    def _warning(message, *args, **kwargs):
        click.echo(message, err=True)

    warnings.showwarning = _warning


cli.add_command(classify)
cli.add_command(count)
cli.add_command(periods)
cli.add_command(rationality)
cli.add_command(evaluate)
cli.add_command(verify)
cli.add_command(examples)
