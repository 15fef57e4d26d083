"""Utilities package for the Selberg heat-trace toolkit."""

from selberg.utils.helpers import (
    SelbergError,
    format_float,
    ordered_map,
)

__all__ = [
    "SelbergError",
    "format_float",
    "ordered_map",
]
