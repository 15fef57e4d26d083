"""Truncated multivariate Taylor series and Gaussian (log-)moments."""

import math
from fractions import Fraction
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
import sympy

from selberg.utils.helpers import (
    DimensionMismatchError,
    InputFormatError,
    PreconditionError,
    SeriesShapeError,
    format_rational,
    parse_rational,
)

MultiIndex = Tuple[int, ...]


class TruncatedSeries:
    """Polynomial in m variables, truncated at total degree D.

    Coefficients are Fractions for exact work; floats and sympy numbers
    are accepted too and propagate through the arithmetic.
    """

    def __init__(self, m: int, degree: int, terms: Optional[Dict[MultiIndex, object]] = None):
        if m < 1 or degree < 0:
            raise PreconditionError(f"Invalid series shape m={m}, D={degree}")
        self._m = m
        self._degree = degree
        self._terms: Dict[MultiIndex, object] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != m:
                raise DimensionMismatchError(m, len(alpha), "multi-index entries")
            if min(alpha) < 0:
                raise PreconditionError(f"Negative multi-index {alpha}")
            if sum(alpha) <= degree and c != 0:
                self._terms[alpha] = self._terms.get(alpha, 0) + c

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def zero(cls, m: int, degree: int) -> "TruncatedSeries":
        return cls(m, degree)

    @classmethod
    def constant(cls, m: int, degree: int, c=1) -> "TruncatedSeries":
        return cls(m, degree, {(0,) * m: Fraction(c) if isinstance(c, int) else c})

    @classmethod
    def variable(cls, m: int, degree: int, i: int) -> "TruncatedSeries":
        """The coordinate x_i (0-based)."""
        alpha = tuple(1 if j == i else 0 for j in range(m))
        return cls(m, degree, {alpha: Fraction(1)})

    @classmethod
    def univariate(cls, coeffs: Iterable, degree: Optional[int] = None) -> "TruncatedSeries":
        """Series in one variable from its coefficient list."""
        coeffs = list(coeffs)
        if degree is None:
            degree = max(len(coeffs) - 1, 0)
        return cls(1, degree, {(k,): c for k, c in enumerate(coeffs)})

    # ------------------------------------------------------------------
    # Accessors
    # ------------------------------------------------------------------

    @property
    def m(self) -> int:
        return self._m

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def terms(self) -> Dict[MultiIndex, object]:
        return dict(self._terms)

    def coefficient(self, alpha: MultiIndex):
        return self._terms.get(tuple(alpha), 0)

    def items(self):
        """Terms sorted by total degree, then lexicographically."""
        return sorted(self._terms.items(), key=lambda item: (sum(item[0]), item[0]))

    def univariate_coefficients(self) -> list:
        """Coefficient list c_0 .. c_D of a one-variable series."""
        if self._m != 1:
            raise DimensionMismatchError(1, self._m, "variables")
        return [self._terms.get((k,), 0) for k in range(self._degree + 1)]

    def valuation(self) -> Optional[int]:
        """Lowest total degree carrying a nonzero coefficient (None for zero)."""
        if not self._terms:
            return None
        return min(sum(alpha) for alpha in self._terms)

    def is_even(self) -> bool:
        """True when only even total degrees occur."""
        return all(sum(alpha) % 2 == 0 for alpha in self._terms)

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------

    def _check_shape(self, other: "TruncatedSeries") -> None:
        if self._m != other._m or self._degree != other._degree:
            raise SeriesShapeError((self._m, self._degree), (other._m, other._degree))

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self + TruncatedSeries.constant(self._m, self._degree, other)
        self._check_shape(other)
        terms = dict(self._terms)
        for alpha, c in other._terms.items():
            terms[alpha] = terms.get(alpha, 0) + c
        return TruncatedSeries(self._m, self._degree, terms)

    __radd__ = __add__

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, a) -> "TruncatedSeries":
        if a == 0:
            return TruncatedSeries(self._m, self._degree)
        return TruncatedSeries(self._m, self._degree, {k: a * c for k, c in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check_shape(other)
        terms: Dict[MultiIndex, object] = {}
        right = [(beta, sum(beta), c) for beta, c in other._terms.items()]
        for alpha, ca in self._terms.items():
            budget = self._degree - sum(alpha)
            for beta, deg, cb in right:
                if deg <= budget:
                    key = tuple(a + b for a, b in zip(alpha, beta))
                    terms[key] = terms.get(key, 0) + ca * cb
        return TruncatedSeries(self._m, self._degree, terms)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "TruncatedSeries":
        if not isinstance(k, int) or k < 0:
            raise PreconditionError(f"Only nonnegative integer powers are supported, got {k!r}")
        result = TruncatedSeries.constant(self._m, self._degree, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def truncate(self, degree: int) -> "TruncatedSeries":
        """Drop terms above the given total degree."""
        return TruncatedSeries(self._m, min(degree, self._degree), self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self._m, self._degree, self._terms) == (other._m, other._degree, other._terms)

    def __repr__(self) -> str:
        return f"TruncatedSeries(m={self._m}, D={self._degree}, terms={len(self._terms)})"

    # ------------------------------------------------------------------
    # Univariate operations
    # ------------------------------------------------------------------

    def compose(self, inner: "TruncatedSeries") -> "TruncatedSeries":
        """Substitute inner (no constant term) into this one-variable series."""
        coeffs = self.univariate_coefficients()
        if inner.coefficient((0,) * inner.m) != 0:
            raise PreconditionError("Inner series of a composition must vanish at 0")
        result = TruncatedSeries.zero(inner.m, inner.degree)
        for c in reversed(coeffs):
            result = result * inner + c
        return result

    def power(self, a) -> "TruncatedSeries":
        """f^a for a one-variable series with f(0) != 0 (exact when f(0) = 1)."""
        f = self.univariate_coefficients()
        f0 = f[0]
        if f0 == 0:
            raise PreconditionError("power() needs a nonzero constant term")
        g = [Fraction(1) if f0 == 1 else f0 ** a]
        for k in range(1, self._degree + 1):
            acc = Fraction(0)
            for j in range(1, k + 1):
                if f[j] != 0:
                    acc += ((a + 1) * j - k) * f[j] * g[k - j]
            g.append(acc / (k * f0))
        return TruncatedSeries.univariate(g, self._degree)

    # ------------------------------------------------------------------
    # Evaluation and serialization
    # ------------------------------------------------------------------

    def evaluate(self, x) -> np.ndarray:
        """Evaluate at points x of shape (m,) or (P, m)."""
        x = np.asarray(x, dtype=float)
        points = np.atleast_2d(x)
        if points.shape[-1] != self._m:
            raise DimensionMismatchError(self._m, points.shape[-1], "coordinates")
        total = np.zeros(points.shape[0])
        for alpha, c in self._terms.items():
            total += float(c) * np.prod(points ** np.array(alpha), axis=1)
        return total[0] if x.ndim == 1 else total

    def to_json(self) -> dict:
        terms = []
        for alpha, c in self.items():
            value = format_rational(c) if isinstance(c, (int, Fraction)) else float(c)
            terms.append({"alpha": list(alpha), "c": value})
        return {"m": self._m, "D": self._degree, "terms": terms}

    @classmethod
    def from_json(cls, data: dict) -> "TruncatedSeries":
        try:
            m = int(data["m"])
            degree = int(data["D"])
            terms = {}
            for entry in data.get("terms", []):
                c = entry["c"]
                c = float(c) if isinstance(c, float) else parse_rational(c)
                alpha = tuple(entry["alpha"])
                terms[alpha] = terms.get(alpha, 0) + c
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"Malformed series: {e}") from e
        return cls(m, degree, terms)


def compose_radial(u_series: TruncatedSeries, m: int, degree: int) -> TruncatedSeries:
    """Substitute u = x_1^2 + ... + x_m^2 into a one-variable series."""
    u = TruncatedSeries.zero(m, degree)
    for i in range(m):
        x = TruncatedSeries.variable(m, degree, i)
        u = u + x * x
    return u_series.compose(u)


# ============================================================================
# Gamma and digamma at half-integers
# ============================================================================

def _constants(exact: bool):
    if exact:
        return sympy.sqrt(sympy.pi), sympy.EulerGamma, sympy.log(2), sympy.Rational
    return math.sqrt(math.pi), float(np.euler_gamma), math.log(2.0), lambda p, q: p / q


def half_gamma(twice: int, exact: bool = False):
    """Gamma(twice / 2) for a positive integer twice, by recursion."""
    if twice < 1:
        raise PreconditionError(f"Gamma argument must be positive, got {twice}/2")
    sqrt_pi, _, _, rational = _constants(exact)
    if twice % 2:
        value, x = sqrt_pi, rational(1, 2)
    else:
        value, x = rational(1, 1), rational(1, 1)
    for _ in range((twice - 1) // 2 if twice % 2 else twice // 2 - 1):
        value = value * x
        x = x + 1
    return value


def half_digamma(twice: int, exact: bool = False):
    """psi_0(twice / 2) for a positive integer twice, by recursion."""
    if twice < 1:
        raise PreconditionError(f"Digamma argument must be positive, got {twice}/2")
    _, euler, log2, rational = _constants(exact)
    if twice % 2:
        value, x = -euler - 2 * log2, rational(1, 2)
    else:
        value, x = -euler, rational(1, 1)
    for _ in range((twice - 1) // 2 if twice % 2 else twice // 2 - 1):
        value = value + 1 / x
        x = x + 1
    return value


# ============================================================================
# Gaussian moments
# ============================================================================

def gauss_moment(alpha: MultiIndex, exact: bool = False):
    """G_alpha = integral of exp(-|y|^2) y^alpha over R^m."""
    if any(a % 2 for a in alpha):
        return 0 if exact else 0.0
    value = 1 if exact else 1.0
    for a in alpha:
        value = value * half_gamma(a + 1, exact)
    return value


def gauss_log_moment(alpha: MultiIndex, m: Optional[int] = None, exact: bool = False):
    """L_alpha = integral of exp(-|y|^2) y^alpha log|y| = psi_0((m+|alpha|)/2) G_alpha / 2."""
    m = len(alpha) if m is None else m
    if len(alpha) != m:
        raise DimensionMismatchError(m, len(alpha), "multi-index entries")
    moment = gauss_moment(alpha, exact)
    if moment == 0:
        return moment
    return half_digamma(m + sum(alpha), exact) * moment / 2


def scaled_log_moment(alpha: MultiIndex, m: int, lam, exact: bool = False):
    """Integral of exp(-lam |x|^2) x^alpha log|x| over R^m.

    Substituting x = y / sqrt(lam) gives lam^{-(m+|alpha|)/2} (L_alpha - G_alpha log(lam) / 2).
    """
    if lam <= 0:
        raise PreconditionError(f"lambda must be positive, got {lam}")
    moment = gauss_moment(alpha, exact)
    if moment == 0:
        return moment
    log_moment = gauss_log_moment(alpha, m, exact)
    p = m + sum(alpha)
    if exact:
        lam = sympy.nsimplify(lam) if isinstance(lam, float) else sympy.sympify(lam)
        return lam ** sympy.Rational(-p, 2) * (log_moment - moment * sympy.log(lam) / 2)
    lam = float(lam)
    return lam ** (-p / 2) * (log_moment - moment * math.log(lam) / 2)
