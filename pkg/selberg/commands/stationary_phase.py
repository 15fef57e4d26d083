"""stationary-phase: expansion of a log-weighted Laplace integral, with an oracle check."""

import argparse
import logging

import numpy as np

from selberg.commands.base import Command, nonnegative_int
from selberg.config import config
from selberg.data.loaders import dump_json, load_series
from selberg.utils.stationary_phase import (
    evaluate_expansion,
    expand_log_integral,
    quadrature_oracle,
    smooth_bump,
)

logger = logging.getLogger(__name__)


class StationaryPhaseCommand(Command):
    name = "stationary-phase"
    help = "expand int exp(-lam f) g log|x| dx as lam -> infinity"

    def add_arguments(self, parser: argparse.ArgumentParser) -> None:
        super().add_arguments(parser)
        parser.add_argument("--f", required=True, metavar="PATH", help="phase series JSON")
        parser.add_argument("--g", required=True, metavar="PATH", help="amplitude series JSON")
        parser.add_argument("--order", type=nonnegative_int, required=True, help="last index N")
        parser.add_argument(
            "--oracle", type=float, action="append", default=[], metavar="LAMBDA",
            help="compare with direct quadrature at this lambda (repeatable)",
        )
        parser.add_argument("--eps", type=float, default=None, help="oracle cutoff radius")
        parser.add_argument("--exact", action="store_true", help="also report exact coefficients")

    def execute(self, args: argparse.Namespace) -> int:
        f = load_series(args.f)
        g = load_series(args.g)
        expansion = expand_log_integral(f, g, args.order, exact=args.exact)
        report = {"expansion": expansion.to_json()}
        if args.exact:
            report["exact"] = [
                {"k": e.k, "a": str(e.a), "b": str(e.b)} for e in expansion.entries
            ]

        eps = config.ORACLE_CUTOFF if args.eps is None else args.eps

        def g_cut(points):
            return g.evaluate(points) * smooth_bump(np.linalg.norm(points, axis=1), eps)

        rows = []
        for lam in args.oracle:
            oracle = quadrature_oracle(f.evaluate, g_cut, lam, f.m, eps)
            value = evaluate_expansion(expansion, lam)
            logger.info(f"lambda={lam}: oracle={oracle:.17g} expansion={value:.17g}")
            rows.append(
                {"lambda": lam, "oracle": oracle, "expansion": value, "residual": oracle - value}
            )
        if rows:
            report["oracle"] = rows
        self.emit(dump_json(report), args)
        return 0


def setup(cli) -> None:
    """Register the command with the CLI."""
    cli.add_command(StationaryPhaseCommand(cli))
