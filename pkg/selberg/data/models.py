"""Record types exchanged between modules and serialized to JSON."""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid

from selberg.config import config
from selberg.utils.helpers import (
    InputFormatError,
    PreconditionError,
    format_rational,
    parse_rational,
)
from selberg.utils.rep_theory import Dimension


def _to_float(value) -> float:
    return float(value)


# ============================================================================
# Small-time expansions
# ============================================================================

@dataclass(frozen=True)
class ExpansionTerm:
    """c * t^beta, or c * t^beta * log t when has_log."""
    beta: Fraction
    coeff: object
    has_log: bool = False


@dataclass(frozen=True)
class SmallTimeExpansion:
    """Finite sum of terms c t^beta (log t)^{0 or 1}, valid on (0, 1].

    Terms are kept sorted by (beta, has_log) with one term per pair.
    """
    terms: Tuple[ExpansionTerm, ...] = ()

    def __post_init__(self):
        merged: Dict[Tuple[Fraction, bool], object] = {}
        for term in self.terms:
            key = (Fraction(term.beta), bool(term.has_log))
            merged[key] = merged.get(key, 0) + term.coeff
        ordered = tuple(
            ExpansionTerm(beta, coeff, has_log)
            for (beta, has_log), coeff in sorted(merged.items())
            if coeff != 0
        )
        object.__setattr__(self, "terms", ordered)

    @classmethod
    def single(cls, beta, coeff, has_log: bool = False) -> "SmallTimeExpansion":
        return cls((ExpansionTerm(Fraction(beta), coeff, has_log),))

    def coefficient(self, beta, has_log: bool = False):
        for term in self.terms:
            if term.beta == Fraction(beta) and term.has_log == has_log:
                return term.coeff
        return 0

    def evaluate(self, t: float) -> float:
        if t <= 0:
            raise PreconditionError(f"t must be positive, got {t}")
        log_t = math.log(t)
        total = 0.0
        for term in self.terms:
            value = float(term.coeff) * t ** float(term.beta)
            total += value * log_t if term.has_log else value
        return total

    def __add__(self, other: "SmallTimeExpansion") -> "SmallTimeExpansion":
        return SmallTimeExpansion(self.terms + other.terms)

    def scale(self, a) -> "SmallTimeExpansion":
        return SmallTimeExpansion(
            tuple(ExpansionTerm(term.beta, a * term.coeff, term.has_log) for term in self.terms)
        )

    def truncated(self, max_beta) -> "SmallTimeExpansion":
        """Keep terms with beta <= max_beta."""
        max_beta = Fraction(max_beta)
        return SmallTimeExpansion(tuple(term for term in self.terms if term.beta <= max_beta))

    def times_exponential(self, rate, max_beta) -> "SmallTimeExpansion":
        """Multiply by exp(rate * t), keeping terms with beta <= max_beta."""
        max_beta = Fraction(max_beta)
        out: List[ExpansionTerm] = []
        for term in self.terms:
            power = 0
            factor = Fraction(1)
            while term.beta + power <= max_beta:
                out.append(ExpansionTerm(term.beta + power, factor * term.coeff, term.has_log))
                power += 1
                factor = factor * rate / power
        return SmallTimeExpansion(tuple(out))

    @property
    def min_beta(self) -> Optional[Fraction]:
        return self.terms[0].beta if self.terms else None

    @property
    def max_beta(self) -> Optional[Fraction]:
        return max(term.beta for term in self.terms) if self.terms else None

    def check_dimension(self, dim: Dimension) -> None:
        if self.terms and self.terms[0].beta < Fraction(-dim.d, 2):
            raise PreconditionError(
                f"Expansion exponent {self.terms[0].beta} below -d/2 = {Fraction(-dim.d, 2)}"
            )

    def to_json(self) -> dict:
        return {
            "terms": [
                {"beta": format_rational(t.beta), "coeff": float(t.coeff), "log": t.has_log}
                for t in self.terms
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "SmallTimeExpansion":
        try:
            terms = tuple(
                ExpansionTerm(
                    parse_rational(entry["beta"]),
                    float(entry["coeff"]),
                    bool(entry.get("log", False)),
                )
                for entry in data["terms"]
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"Malformed expansion: {e}") from e
        return cls(terms)


# ============================================================================
# Stationary-phase expansions
# ============================================================================

@dataclass(frozen=True)
class LogEntry:
    """Coefficients of (a log(lam) + b) lam^{-m/2 - k/2}."""
    k: int
    a: object
    b: object


@dataclass(frozen=True)
class LogExpansion:
    """sum_k (a_k log(lam) + b_k) lam^{-m/2 - k/2}, entries sorted by k."""
    m: int
    entries: Tuple[LogEntry, ...] = ()

    def __post_init__(self):
        ks = [entry.k for entry in self.entries]
        if ks != sorted(set(ks)):
            raise PreconditionError("LogExpansion entries must have unique increasing k")

    def entry(self, k: int) -> Optional[LogEntry]:
        for entry in self.entries:
            if entry.k == k:
                return entry
        return None

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "entries": [
                {"k": e.k, "a": _to_float(e.a), "b": _to_float(e.b)} for e in self.entries
            ],
        }


# ============================================================================
# Manifold data
# ============================================================================

@dataclass(frozen=True)
class LengthSpectrumEntry:
    """A closed geodesic: length, primitive length and holonomy.

    Holonomy is given by the rotation angles of m_gamma; explicit character
    values tr sigma(m_gamma) may be added, keyed by weight_key(sigma.k).
    """
    ell: float
    ell0: float
    angles: Tuple[float, ...] = ()
    characters: Optional[Dict[str, complex]] = None

    def __post_init__(self):
        if self.ell <= 0 or self.ell0 <= 0:
            raise PreconditionError("Geodesic lengths must be positive")
        ratio = self.ell / self.ell0
        if round(ratio) < 1 or abs(ratio - round(ratio)) > 1e-9:
            raise PreconditionError(
                f"Length {self.ell} is not a positive multiple of primitive length {self.ell0}"
            )


@dataclass(frozen=True)
class ManifoldData:
    """Geometric data of a finite-volume hyperbolic manifold."""
    dim: Dimension
    volume: float
    kappa: int = 0
    C1: float = 0.0
    C2: float = 0.0
    spectrum: Tuple[LengthSpectrumEntry, ...] = ()
    c_n: float = 1.0

    def __post_init__(self):
        if self.volume <= 0:
            raise PreconditionError(f"Volume must be positive, got {self.volume}")
        if self.kappa < 0:
            raise PreconditionError(f"Cusp count must be nonnegative, got {self.kappa}")
        if self.kappa == 0 and (self.C1 != 0 or self.C2 != 0):
            raise PreconditionError("A compact manifold (kappa = 0) must have C1 = C2 = 0")
        if self.c_n <= 0:
            raise PreconditionError(f"Plancherel constant must be positive, got {self.c_n}")
        for entry in self.spectrum:
            if len(entry.angles) != self.dim.n:
                raise PreconditionError(
                    f"Geodesic of length {entry.ell} needs {self.dim.n} rotation angles"
                )

    def without_spectrum(self) -> "ManifoldData":
        return ManifoldData(self.dim, self.volume, self.kappa, self.C1, self.C2, (), self.c_n)


# ============================================================================
# Spectral data
# ============================================================================

@dataclass(frozen=True, eq=False)
class ContinuousSpectrum:
    """Sampled intertwining-trace integrands, one row per shift."""
    grid: np.ndarray
    values: np.ndarray
    shifts: Tuple[float, ...]
    c_zero: Tuple[float, ...] = ()

    def __post_init__(self):
        grid = np.asarray(self.grid, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1:
            values = np.tile(values, (len(self.shifts), 1))
        if grid.ndim != 1 or grid.size < 2:
            raise InputFormatError("Continuous grid needs at least two points")
        if not np.allclose(grid, -grid[::-1], rtol=0.0, atol=config.SPECTRAL_GRID_TOLERANCE):
            raise InputFormatError("Continuous-spectrum grid must be symmetric about 0")
        if values.shape != (len(self.shifts), grid.size):
            raise InputFormatError(
                f"Continuous values have shape {values.shape}, expected "
                f"({len(self.shifts)}, {grid.size})"
            )
        c_zero = tuple(self.c_zero) or (0.0,) * len(self.shifts)
        if len(c_zero) != len(self.shifts):
            raise InputFormatError("c_zero must have one entry per shift")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "c_zero", c_zero)


@dataclass(frozen=True)
class SpectralData:
    """Discrete eigenvalues with multiplicities plus optional continuous part."""
    eigenvalues: Tuple[Tuple[float, int], ...] = ()
    h: int = 0
    continuous: Optional[ContinuousSpectrum] = None

    def __post_init__(self):
        for lam, mult in self.eigenvalues:
            if lam < 0 or mult < 0:
                raise InputFormatError(f"Invalid eigenvalue entry ({lam}, {mult})")
        if self.h < 0:
            raise InputFormatError(f"Kernel dimension must be nonnegative, got {self.h}")

    def constant_term(self) -> float:
        """t -> 0 limit of the spectral model of the regularized trace."""
        total = float(sum(mult for _, mult in self.eigenvalues))
        cont = self.continuous
        if cont is not None:
            for i in range(len(cont.shifts)):
                total += cont.c_zero[i] / 4.0
                total -= trapezoid(cont.values[i], cont.grid) / (4.0 * math.pi)
        return total


# ============================================================================
# Torsion inputs
# ============================================================================

@dataclass
class DegreeInput:
    """Data for one form degree p: a determinant, or a heat-trace model."""
    det: Optional[float] = None
    trace_eval: Optional[Callable[[float], float]] = None
    expansion: Optional[SmallTimeExpansion] = None
    h: float = 0.0
    tail_coeffs: Sequence[float] = field(default_factory=tuple)

    def __post_init__(self):
        if self.det is None and (self.trace_eval is None or self.expansion is None):
            raise PreconditionError("Degree input needs a determinant or a trace model")


@dataclass
class TorsionInput:
    """Per-degree inputs for p = 1, ..., d."""
    degrees: Dict[int, DegreeInput]
