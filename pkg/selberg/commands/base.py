"""Shared behavior of the CLI subcommands."""

import argparse
import logging
import sys
from pathlib import Path

from selberg.utils.helpers import ManifestReadError
from selberg.utils.rep_theory import Dimension, GroupKind

logger = logging.getLogger(__name__)


class Command:
    """A subcommand: declares its arguments and runs against parsed args."""

    name: str = ""
    help: str = ""

    def __init__(self, cli):
        self.cli = cli

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        parser.add_argument("--output", metavar="PATH", help="write the report here instead of stdout")

    def execute(self, args: argparse.Namespace) -> int:
        raise NotImplementedError

    def emit(self, text: str, args: argparse.Namespace) -> None:
        """Write a report to --output or stdout."""
        if not text.endswith("\n"):
            text += "\n"
        if args.output:
            try:
                Path(args.output).write_text(text, encoding="utf-8")
            except OSError as e:
                raise ManifestReadError(args.output, e.strerror or str(e), "output") from e
            logger.info(f"Wrote {args.output}")
        else:
            sys.stdout.write(text)


def add_dimension_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dim", type=int, required=True, help="odd dimension d >= 3")
    parser.add_argument(
        "--group",
        choices=[kind.value for kind in GroupKind],
        default=GroupKind.SO0.value,
        help="group cover; Spin admits half-integral weights",
    )


def dimension_from(args: argparse.Namespace) -> Dimension:
    return Dimension.from_d(args.dim, GroupKind(args.group))


def nonnegative_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {value}")
    return value
