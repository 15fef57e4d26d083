"""expand: small-time expansion of the regularized trace."""

import argparse
import logging

from selberg.commands.base import Command, nonnegative_int
from selberg.data.loaders import dump_json, load_amplitude, load_manifold
from selberg.utils.rep_theory import KWeight, parse_weight
from selberg.utils.trace_formula import geometric_expansion

logger = logging.getLogger(__name__)


class ExpandCommand(Command):
    name = "expand"
    help = "small-time expansion of I + C1 T + C2 T' as JSON terms"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--manifold", required=True, metavar="PATH", help="manifold JSON")
        parser.add_argument("--nu", required=True, help="K-weight k2,...,kn1")
        parser.add_argument(
            "--order", type=nonnegative_int, default=None,
            help="expansion order for every contribution (defaults from settings)",
        )
        parser.add_argument("--amplitude", metavar="PATH", help="heat amplitude JSON")

    def execute(self, args: argparse.Namespace) -> int:
        manifold = load_manifold(args.manifold)
        nu = parse_weight(KWeight, manifold.dim, args.nu)
        amplitude = load_amplitude(args.amplitude, nu, manifold.dim) if args.amplitude else None
        expansion = geometric_expansion(
            manifold,
            nu,
            amplitude,
            identity_order=args.order,
            t_order=args.order,
            tprime_order=args.order,
        )
        logger.info(f"Expansion for nu={nu}: {len(expansion.terms)} terms")
        self.emit(dump_json(expansion.to_json()), args)
        return 0


def setup(cli) -> None:
    """Register the command with the CLI."""
    cli.add_command(ExpandCommand(cli))
