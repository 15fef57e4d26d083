"""Shared utilities: exceptions, number formatting, ordered parallel map."""

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Iterable, List, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def ordered_map(func: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Apply func to every item, possibly in parallel, keeping input order."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def parse_rational(value) -> Fraction:
    """Parse an integer, a "p/q" string or an exactly representable float."""
    if isinstance(value, bool):
        raise InputFormatError(f"Expected a rational number, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, float):
        if value != value or value in (float("inf"), float("-inf")):
            raise InputFormatError(f"Expected a rational number, got {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputFormatError(f"Expected a rational number, got {value!r}") from e
    raise InputFormatError(f"Expected a rational number, got {value!r}")


def format_rational(value: Fraction) -> int | str:
    """Format a rational for JSON: an integer when integral, else "p/q"."""
    value = Fraction(value)
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


def format_float(value: float, digits: int = 17) -> str:
    """Format a float with a fixed number of significant digits."""
    return format(float(value), f".{digits}g")


class SelbergError(Exception):
    """Base exception for toolkit errors."""
    pass


class ConfigError(SelbergError):
    """Invalid or unreadable configuration."""
    def __init__(self, message: str):
        super().__init__(message)


class InvalidWeightError(SelbergError):
    """Highest weight violating ordering or integrality."""
    def __init__(self, kind: str, entries, reason: str):
        self.kind = kind
        self.entries = tuple(entries)
        super().__init__(f"Invalid {kind} weight {format_weight(self.entries)}: {reason}")


class DimensionMismatchError(SelbergError):
    """Objects built for different dimensions were combined."""
    def __init__(self, expected: int, got: int, what: str = "entries"):
        self.expected = expected
        self.got = got
        super().__init__(f"Dimension mismatch: expected {expected} {what}, got {got}")


class SeriesShapeError(SelbergError):
    """Truncated series with different variable counts or degrees."""
    def __init__(self, left: tuple, right: tuple):
        self.left = left
        self.right = right
        super().__init__(
            f"Series shapes differ: (m={left[0]}, D={left[1]}) vs (m={right[0]}, D={right[1]})"
        )


class PreconditionError(SelbergError):
    """Input outside the domain of an operation."""
    def __init__(self, message: str):
        super().__init__(message)


class DegreeBudgetError(SelbergError):
    """Series degree too small for the requested expansion order."""
    def __init__(self, degree: int, order: int, factor: int):
        self.degree = degree
        self.order = order
        super().__init__(
            f"Series degree {degree} too small for order {order} (need at least {factor * order})"
        )


class QuadratureError(SelbergError):
    """Quadrature refinement did not converge within its panel budget."""
    def __init__(self, estimate: float, panels: int):
        self.estimate = estimate
        self.panels = panels
        super().__init__(
            f"Quadrature did not converge: error estimate {estimate:.3e} after {panels} panels"
        )


class UnsupportedCharacterError(SelbergError):
    """No character value available for a representation."""
    def __init__(self, message: str):
        super().__init__(message)


class HolomorphyError(SelbergError):
    """Small-time expansion carries a t^0 log t term."""
    def __init__(self, coefficient: float):
        self.coefficient = coefficient
        super().__init__(
            f"Zeta function not holomorphic at s=0: t^0 log t coefficient {coefficient:.3e}"
        )


class InputFormatError(SelbergError):
    """Malformed input data."""
    def __init__(self, message: str, path: str | None = None, line: int | None = None,
                 column: int | None = None):
        self.path = path
        self.line = line
        self.column = column
        location = ""
        if path is not None:
            location = f"{path}"
            if line is not None:
                location += f":{line}:{column}"
            location += ": "
        super().__init__(f"{location}{message}")


class ManifestReadError(SelbergError):
    """Input file could not be read."""
    def __init__(self, path: str, reason: str, kind: str = "manifest"):
        self.path = path
        super().__init__(f"cannot read {kind} {path}: {reason}")


def format_weight(entries) -> str:
    """Format weight entries as "(a, b, ...)"."""
    return "(" + ", ".join(str(Fraction(e)) for e in entries) + ")"


def weight_key(entries) -> str:
    """Canonical text key "a,b,..." of a weight, as used in character tables."""
    return ",".join(str(Fraction(e)) for e in entries)
