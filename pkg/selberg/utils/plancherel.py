"""Plancherel polynomial of the principal series and the identity contribution."""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

import sympy

from selberg.config import config
from selberg.data.models import ExpansionTerm, SmallTimeExpansion
from selberg.utils.helpers import PreconditionError
from selberg.utils.rep_theory import (
    Dimension,
    MWeight,
    casimir_sigma,
    d_roots,
    rho_m,
    rho_vector,
)
from selberg.utils.series import half_gamma

logger = logging.getLogger(__name__)

_W = sympy.Symbol("w")


@dataclass(frozen=True)
class PlancherelPolynomial:
    """P_sigma(z) = c_n * sum_k base_coeffs[k] z^{2k}."""
    m_weight: MWeight
    dim: Dimension
    c_n: object
    base_coeffs: Tuple[Fraction, ...]

    @property
    def coeffs(self) -> tuple:
        """Coefficients indexed by the power of z^2."""
        return tuple(self.c_n * c for c in self.base_coeffs)

    @property
    def degree(self) -> int:
        return 2 * (len(self.base_coeffs) - 1)

    def z_coeffs(self) -> tuple:
        """Coefficients indexed by the power of z (odd entries are zero)."""
        out = []
        for c in self.coeffs:
            out.extend([c, 0])
        return tuple(out[:-1])

    def evaluate(self, z: complex) -> complex:
        """Horner evaluation in w = z^2."""
        w = complex(z) ** 2
        value = 0j
        for c in reversed(self.coeffs):
            value = value * w + float(c)
        return value

    def density(self, lam: float) -> float:
        """P_sigma(i lam), real for real lam."""
        return self.evaluate(1j * lam).real


def _to_fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def build_plancherel(sigma: MWeight, dim: Dimension, c_n=None) -> PlancherelPolynomial:
    """Expand -c_n prod_{a > 0} <z e_1 + Lambda(sigma) + rho_M, a> / <rho_G, a> over D_{n+1}.

    Roots e_1 +- e_j contribute (z - v_j)(z + v_j) = z^2 - v_j^2, so only even
    powers of z occur; the remaining roots give a rational constant.
    """
    c_n = config.PLANCHEREL_CN if c_n is None else c_n
    if c_n <= 0:
        raise PreconditionError(f"Plancherel constant must be positive, got {c_n}")
    sigma.check(dim)

    v = [k + r for k, r in zip(sigma.k, rho_m(dim))]
    rho = rho_vector(dim)

    constant = Fraction(-1)
    for root in d_roots(dim.n + 1):
        constant /= sum((r * c for r, c in zip(rho, root)), Fraction(0))
    for root in d_roots(dim.n):
        constant *= sum((x * c for x, c in zip(v, root)), Fraction(0))

    poly = sympy.Poly(1, _W, domain=sympy.QQ)
    for vj in v:
        poly = poly * sympy.Poly(_W - sympy.Rational(vj.numerator, vj.denominator) ** 2, _W,
                                 domain=sympy.QQ)
    base = tuple(constant * _to_fraction(c) for c in reversed(poly.all_coeffs()))
    return PlancherelPolynomial(sigma, dim, c_n, base)


def _check_volume(vol) -> None:
    if vol < 0:
        raise PreconditionError(f"Volume must be nonnegative, got {vol}")


def identity_expansion(
    vol,
    sigmas: Iterable[Tuple[MWeight, int]],
    dim: Dimension,
    c_n=None,
    order: Optional[int] = None,
    exact: bool = False,
) -> SmallTimeExpansion:
    """Small-time expansion sum_{j<=N} a_j t^{-d/2+j} of the identity contribution.

    Uses int exp(-t lam^2) lam^{2k} d lam = Gamma(k+1/2) t^{-k-1/2} and the
    Taylor series of exp(t c(sigma)).
    """
    order = config.IDENTITY_ORDER if order is None else order
    if order < 0:
        raise PreconditionError(f"Expansion order must be nonnegative, got {order}")
    _check_volume(vol)
    max_beta = Fraction(-dim.d, 2) + order

    total = SmallTimeExpansion()
    for sigma, mult in sigmas:
        poly = build_plancherel(sigma, dim, c_n)
        terms = []
        for k, p in enumerate(poly.base_coeffs):
            if p == 0:
                continue
            sign = -1 if k % 2 else 1
            gamma = half_gamma(2 * k + 1, exact)
            coeff = sign * (p * gamma if exact else float(p) * gamma)
            terms.append(ExpansionTerm(Fraction(-2 * k - 1, 2), coeff))
        shifted = SmallTimeExpansion(tuple(terms)).times_exponential(
            casimir_sigma(sigma, dim), max_beta
        )
        total = total + shifted.scale(vol * poly.c_n * mult)
    logger.debug(f"Identity expansion: {len(total.terms)} terms up to t^{max_beta}")
    return total


def identity_numeric(
    t: float,
    vol,
    sigmas: Sequence[Tuple[MWeight, int]],
    dim: Dimension,
    c_n=None,
) -> float:
    """vol sum_sigma e^{t c(sigma)} int exp(-t lam^2) P_sigma(i lam) d lam in closed form."""
    if t <= 0:
        raise PreconditionError(f"t must be positive, got {t}")
    _check_volume(vol)
    total = 0.0
    for sigma, mult in sigmas:
        poly = build_plancherel(sigma, dim, c_n)
        integral = 0.0
        for k, p in enumerate(poly.base_coeffs):
            sign = -1.0 if k % 2 else 1.0
            integral += sign * float(p) * half_gamma(2 * k + 1) * t ** (-k - 0.5)
        total += mult * float(poly.c_n) * math.exp(t * float(casimir_sigma(sigma, dim))) * integral
    return float(vol) * total
