"""trace: geometric side of the regularized trace on a t-grid."""

import argparse
import csv
import io
import logging

import numpy as np

from selberg.commands.base import Command
from selberg.config import config
from selberg.data.loaders import load_amplitude, load_manifold
from selberg.utils.helpers import format_float, ordered_map
from selberg.utils.rep_theory import KWeight, parse_weight
from selberg.utils.trace_formula import default_amplitude, geometric_terms

logger = logging.getLogger(__name__)

CSV_HEADER = ["t", "I", "H", "T", "Tprime", "total"]


def parse_grid(text: str) -> np.ndarray:
    """Parse "a:b:steps" into steps points from a to b."""
    try:
        a, b, steps = text.split(":")
        a, b, steps = float(a), float(b), int(steps)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:steps, got {text!r}")
    if steps < 1:
        raise argparse.ArgumentTypeError(f"step count must be positive, got {steps}")
    if min(a, b) <= 0:
        raise argparse.ArgumentTypeError("t values must be positive")
    return np.linspace(a, b, steps)


class TraceCommand(Command):
    name = "trace"
    help = "evaluate I, H, T, T' and the regularized trace on a t-grid (CSV)"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--manifold", required=True, metavar="PATH", help="manifold JSON")
        parser.add_argument("--nu", required=True, help="K-weight k2,...,kn1")
        parser.add_argument("--t", type=parse_grid, required=True, metavar="A:B:STEPS")
        parser.add_argument("--amplitude", metavar="PATH", help="heat amplitude JSON")
        parser.add_argument("--workers", type=int, default=None)

    def execute(self, args: argparse.Namespace) -> int:
        manifold = load_manifold(args.manifold)
        dim = manifold.dim
        nu = parse_weight(KWeight, dim, args.nu)
        amplitude = (
            load_amplitude(args.amplitude, nu, dim) if args.amplitude else default_amplitude(nu, dim)
        )
        workers = config.WORKERS if args.workers is None else args.workers
        logger.info(f"Evaluating {len(args.t)} t-values for nu={nu} on {workers} worker(s)")

        rows = ordered_map(
            lambda t: geometric_terms(float(t), manifold, nu, amplitude), args.t, workers
        )

        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            values = (row.t, row.identity, row.hyperbolic, row.parabolic, row.weighted, row.total)
            writer.writerow([format_float(v, config.OUTPUT_DIGITS) for v in values])
        self.emit(buffer.getvalue(), args)
        return 0


def setup(cli) -> None:
    """Register the command with the CLI."""
    cli.add_command(TraceCommand(cli))
