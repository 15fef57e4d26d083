"""Main entry point for the Selberg heat-trace toolkit."""

import argparse
import importlib
import logging
import sys
from typing import Dict, List, Optional

from selberg import __version__
from selberg.config import config
from selberg.utils.helpers import ConfigError, SelbergError

LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)-20s | %(message)s"
logger = logging.getLogger("selberg")

COMMAND_MODULES = [
    "selberg.commands.plancherel",
    "selberg.commands.stationary_phase",
    "selberg.commands.trace",
    "selberg.commands.expand",
    "selberg.commands.torsion",
    "selberg.commands.check",
]


def setup_logging(verbose: bool = False) -> None:
    """Log to stderr (stdout carries reports), plus LOG_FILE when configured."""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if config.LOG_FILE:
        handlers.append(logging.FileHandler(config.LOG_FILE, encoding="utf-8"))
    logging.basicConfig(
        level=logging.DEBUG if verbose else getattr(logging, config.LOG_LEVEL.upper()),
        format=LOG_FORMAT,
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=handlers,
        force=True,
    )


def version_string() -> str:
    return (
        f"selberg {__version__} (orders: identity={config.IDENTITY_ORDER}, "
        f"T={config.PARABOLIC_T_ORDER}, T'={config.TPRIME_ORDER})"
    )


class SelbergCLI:
    """Argument parser plus the registry of subcommands."""

    def __init__(self):
        self.parser = argparse.ArgumentParser(
            prog="selberg",
            description="Geometric side of the Selberg trace formula, heat-trace "
                        "expansions and analytic torsion for odd-dimensional hyperbolic manifolds.",
        )
        self.parser.add_argument("--version", action="version", version=version_string())
        self.parser.add_argument("--settings", metavar="PATH", help="KEY=VALUE settings file")
        self.parser.add_argument("--verbose", action="store_true", help="debug logging")
        self.subparsers = self.parser.add_subparsers(dest="command", required=True)
        self.commands: Dict[str, object] = {}

    def add_command(self, command) -> None:
        parser = self.subparsers.add_parser(command.name, help=command.help)
        command.add_arguments(parser)
        self.commands[command.name] = command

    def load_commands(self) -> None:
        for module_name in COMMAND_MODULES:
            try:
                importlib.import_module(module_name).setup(self)
                logger.debug(f"Loaded command: {module_name}")
            except ImportError as e:
                logger.error(f"Failed to load command {module_name}: {e}")

    def dispatch(self, args: argparse.Namespace) -> int:
        return self.commands[args.command].execute(args)


def run(argv: Optional[List[str]] = None) -> int:
    """Parse argv, execute the subcommand and return the exit code."""
    cli = SelbergCLI()
    cli.load_commands()
    try:
        args = cli.parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 after --help / --version
        return e.code if isinstance(e.code, int) else 0

    try:
        if args.settings:
            config.load_file(args.settings)
        config.validate()
    except ConfigError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return 1

    setup_logging(args.verbose)
    try:
        return cli.dispatch(args)
    except SelbergError as e:
        logger.debug("Command failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    """Console entry point."""
    sys.exit(run())


if __name__ == "__main__":
    main()
