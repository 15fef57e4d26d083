"""torsion: zeta-regularized determinants and analytic torsion from spectral data."""

import argparse
import logging

from selberg.commands.base import Command, add_dimension_arguments, dimension_from
from selberg.config import config
from selberg.data.loaders import dump_json, load_expansions, load_spectral
from selberg.data.models import DegreeInput, TorsionInput
from selberg.utils.rep_theory import GWeight, is_theta_invariant, parse_weight, trivial_weight
from selberg.utils.zeta_torsion import (
    compute_torsion,
    hodge_shift,
    hodge_shift_expansion,
    regularized_trace_spectral,
    spectral_expansion,
)

logger = logging.getLogger(__name__)


def parse_floats(text: str) -> tuple:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


class TorsionCommand(Command):
    name = "torsion"
    help = "zeta(0), zeta'(0), determinants and log T_X from per-degree spectral data"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        add_dimension_arguments(parser)
        parser.add_argument("--spectral", required=True, metavar="PATH", help="spectral data JSON")
        parser.add_argument("--tau", default=None, help="G-weight k1,...,kn1 (default trivial)")
        parser.add_argument("--expansions", metavar="PATH", help="per-degree small-time expansions")
        parser.add_argument("--tail-coeffs", type=parse_floats, default=(), metavar="C1,C2,...")
        parser.add_argument("--workers", type=int, default=None)

    def execute(self, args: argparse.Namespace) -> int:
        dim = dimension_from(args)
        d = dim.d
        tau = parse_weight(GWeight, dim, args.tau) if args.tau else trivial_weight(GWeight, dim)
        spectral = load_spectral(args.spectral, d)
        expansions = load_expansions(args.expansions, d) if args.expansions else {}
        if is_theta_invariant(tau) and not args.tail_coeffs:
            logger.warning(f"tau={tau} is theta-invariant; large-time decay may be polynomial")

        degrees = {}
        for p in range(1, d + 1):
            data = spectral[p]
            base = expansions.get(p) or spectral_expansion(data)

            def trace(t: float, data=data) -> float:
                return hodge_shift(regularized_trace_spectral(t, data), tau, dim, t)

            degrees[p] = DegreeInput(
                trace_eval=trace,
                expansion=hodge_shift_expansion(base, tau, dim),
                h=data.h,
                tail_coeffs=args.tail_coeffs,
            )

        workers = config.WORKERS if args.workers is None else args.workers
        report = compute_torsion(TorsionInput(degrees), d, workers)
        logger.info(f"log T_X = {report.log_torsion:.17g}")
        self.emit(dump_json(report.to_json()), args)
        return 0


def setup(cli) -> None:
    """Register the command with the CLI."""
    cli.add_command(TorsionCommand(cli))
