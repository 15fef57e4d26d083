"""plancherel: coefficients of P_sigma."""

import argparse
import logging
from fractions import Fraction

from selberg.commands.base import Command, add_dimension_arguments, dimension_from
from selberg.config import config
from selberg.data.loaders import dump_json
from selberg.utils.helpers import format_rational, parse_rational
from selberg.utils.plancherel import build_plancherel
from selberg.utils.rep_theory import MWeight, casimir_sigma, parse_weight

logger = logging.getLogger(__name__)


def _number(value):
    """Integers stay integers; other rationals become floats."""
    if isinstance(value, Fraction) and value.denominator == 1:
        return value.numerator
    return float(value)


class PlancherelCommand(Command):
    name = "plancherel"
    help = "expand the Plancherel polynomial P_sigma(z) in powers of z^2"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        add_dimension_arguments(parser)
        parser.add_argument("--sigma", required=True, help="M-weight k2,...,kn1")
        parser.add_argument("--cn", default=None, help="Plancherel constant c(n) (rational)")

    def execute(self, args: argparse.Namespace) -> int:
        dim = dimension_from(args)
        sigma = parse_weight(MWeight, dim, args.sigma)
        c_n = parse_rational(args.cn if args.cn is not None else config.PLANCHEREL_CN)
        poly = build_plancherel(sigma, dim, c_n)
        logger.info(f"P_sigma for sigma={sigma}, d={dim.d}: degree {poly.degree}")
        report = {
            "coeffs": [_number(c) for c in poly.coeffs],
            "degree": poly.degree,
            "exact": [format_rational(c) for c in poly.coeffs],
            "casimir": format_rational(casimir_sigma(sigma, dim)),
        }
        self.emit(dump_json(report), args)
        return 0


def setup(cli) -> None:
    """Register the command with the CLI."""
    cli.add_command(PlancherelCommand(cli))
