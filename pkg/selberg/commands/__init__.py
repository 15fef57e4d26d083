"""CLI subcommands; each module registers itself through setup(cli)."""
