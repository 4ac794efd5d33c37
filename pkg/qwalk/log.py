"""
Logging set-up for verification runs.

The screen log keeps the box-drawing and Greek symbols used for lattice
quantities; the log file gets a plain ASCII rendering of the same text.
"""

import datetime
import logging
import math
import sys
import textwrap
from pathlib import Path
from typing import Iterable, Union

from qwalk.constants import output_width

__author__ = "Alex Ganose"
__maintainer__ = "Alex Ganose"
__email__ = "aganose@lbl.gov"

logger = logging.getLogger(__name__)

_tree_marks = ("├──", "└──")

# multi-character symbols must be replaced before the single characters
_ascii_words = (
    ("├──", "-"),
    ("└──", "-"),
    ("℘′", "wp'"),
    ("℘", "wp"),
    ("ζ", "zeta"),
    ("ξ", "xi"),
    ("η", "eta"),
    ("φ", "phi"),
    ("Δ", "Delta"),
    ("π", "pi"),
    ("≤", "<="),
    ("∞", "inf"),
)
_ascii_chars = str.maketrans(
    {
        "│": " ",
        "–": "-",
        "ℓ": "l",
        "ω": "w",
        "α": "a",
        "β": "b",
        "γ": "g",
        "δ": "d",
        **{chr(0x2080 + i): str(i) for i in range(10)},
    }
)


def timestamp() -> str:
    """The current date and time, as written at the start and end of a run."""
    return datetime.datetime.now().strftime("%d %b %Y at %H:%M")


def to_ascii(text: str) -> str:
    """Replace the logo, tree pipes and mathematical symbols with ASCII."""
    text = text.replace(fancy_logo, simple_logo)
    for symbol, word in _ascii_words:
        text = text.replace(symbol, word)
    return text.translate(_ascii_chars)


class QwalkFormatter(logging.Formatter):
    """Indent and wrap messages to the report width.

    Tree items written by :func:`log_list` are kept on consecutive lines;
    every other message is preceded by a blank line.

    Args:
        width: The maximum line width.
        ascii_only: Render the message with :func:`to_ascii`.
    """

    def __init__(self, width: int = output_width, ascii_only: bool = False):
        super().__init__(fmt="%(message)s")
        self.ascii_only = ascii_only
        self._wrapper = textwrap.TextWrapper(
            width=width, subsequent_indent="  ", drop_whitespace=False
        )

    def format(self, record: logging.LogRecord) -> str:
        message = super().format(record)
        if any(mark in message for mark in _tree_marks):
            text = "  " + message
        else:
            lines = (self._wrapper.fill("  " + line) for line in message.splitlines())
            text = "\n" + "\n".join(lines)
        return to_ascii(text) if self.ascii_only else text


def initialize_qwalk_logger(
    directory: Union[str, Path] = ".",
    filename: Union[str, Path, bool] = "qwalk.log",
    level: int = logging.INFO,
    print_log: bool = True,
) -> logging.Logger:
    """Configure the ``qwalk`` logger.

    Any existing handlers are removed. Uncaught exceptions (other than
    keyboard interrupts) are routed through the logger so that the
    traceback also ends up in the log file.

    Args:
        directory: Folder in which the log file is written.
        filename: Name of the log file. If False, no file is written.
        level: The log level.
        print_log: Whether to also log to stdout.

    Returns:
        The configured logger.
    """
    qwalk_logger = logging.getLogger("qwalk")
    qwalk_logger.setLevel(level)
    qwalk_logger.handlers = []

    handlers = []
    if filename is not False:
        file_handler = logging.FileHandler(Path(directory) / filename, mode="w")
        file_handler.setFormatter(QwalkFormatter(ascii_only=True))
        handlers.append(file_handler)

    if print_log:
        stream_handler = logging.StreamHandler(stream=sys.stdout)
        stream_handler.setFormatter(QwalkFormatter())
        handlers.append(stream_handler)

    for handler in handlers:
        qwalk_logger.addHandler(handler)

    def _log_uncaught(exc_type, exc_value, exc_traceback):
        if issubclass(exc_type, KeyboardInterrupt):
            sys.__excepthook__(exc_type, exc_value, exc_traceback)
        else:
            qwalk_logger.error(
                f"\n  ERROR: qwalk exiting on {timestamp()}",
                exc_info=(exc_type, exc_value, exc_traceback),
            )

    sys.excepthook = _log_uncaught
    return qwalk_logger


def log_banner(text: str):
    """Log a section heading padded with tildes to the report width."""
    padding = (output_width - 4 - len(text)) / 2
    left, right = "~" * math.ceil(padding), "~" * math.floor(padding)
    logger.info(f"\n{left} {text} {right}")


def log_list(items: Iterable[str], indent: str = "  ", level: int = logging.INFO):
    """Log items as the branches of a tree, closing with a corner pipe."""
    items = list(items)
    for n, item in enumerate(items, start=1):
        mark = _tree_marks[n == len(items)]
        logger.log(level, f"{indent}{mark} {item}")


fancy_logo = """          ██████╗ ██╗    ██╗ █████╗ ██╗     ██╗  ██╗
         ██╔═══██╗██║    ██║██╔══██╗██║     ██║ ██╔╝
         ██║   ██║██║ █╗ ██║███████║██║     █████╔╝
         ██║▄▄ ██║██║███╗██║██╔══██║██║     ██╔═██╗
         ╚██████╔╝╚███╔███╔╝██║  ██║███████╗██║  ██╗
          ╚══▀▀═╝  ╚══╝╚══╝ ╚═╝  ╚═╝╚══════╝╚═╝  ╚═╝
"""

simple_logo = r"""            ___  __        __ _    _     _  __
           / _ \ \ \      / // \  | |   | |/ /
          | | | | \ \ /\ / // _ \ | |   | ' /
          | |_| |  \ V  V // ___ \| |___| . \
           \__\_\   \_/\_//_/   \_\_____|_|\_\
"""
