"""Geometric side of the trace formula for the heat kernel h_t^nu.

The regularized trace of exp(-t A_nu) is

    I(h_t) + H(h_t) + C1 T(h_t) + C2 T'(h_t)

with the identity, hyperbolic, parabolic and weighted-parabolic contributions
evaluated numerically or expanded as t -> 0.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np
import sympy

from selberg.config import config
from selberg.data.models import (
    ExpansionTerm,
    LengthSpectrumEntry,
    ManifoldData,
    SmallTimeExpansion,
)
from selberg.utils.geometry import (
    half_angle_cosine_series,
    inverse_jacobian_series,
    r_squared_series,
    radial_distance,
)
from selberg.utils.helpers import (
    HolomorphyError,
    PreconditionError,
    UnsupportedCharacterError,
    weight_key,
)
from selberg.utils.plancherel import identity_expansion, identity_numeric
from selberg.utils.rep_theory import (
    Dimension,
    KWeight,
    MWeight,
    casimir_nu,
    casimir_sigma,
    dim_weyl_m,
    restrictions,
    rotation_multiplicities,
    trivial_weight,
)
from selberg.utils.series import TruncatedSeries, compose_radial
from selberg.utils.stationary_phase import (
    expand_log_integral,
    radial_quadrature,
    smooth_bump,
)

logger = logging.getLogger(__name__)


def _check_t(t: float) -> None:
    if t <= 0:
        raise PreconditionError(f"t must be positive, got {t}")


# ============================================================================
# Characters and closed-form contributions
# ============================================================================

def character_heat(sigma: MWeight, lam: float, t: float, dim: Dimension) -> float:
    """Theta_{sigma,lam}(h_t^nu) = exp(t (c(sigma) - lam^2))."""
    _check_t(t)
    return math.exp(t * (float(casimir_sigma(sigma, dim)) - lam * lam))


def _sigma_character(entry: LengthSpectrumEntry, sigma: MWeight, dim: Dimension) -> complex:
    """tr sigma(m_gamma)."""
    if entry.characters is not None:
        key = weight_key(sigma.k)
        if key in entry.characters:
            return complex(entry.characters[key])
    if dim.n == 1:
        return cmath.exp(1j * float(sigma.k[0]) * entry.angles[0])
    raise UnsupportedCharacterError(
        f"No character value for sigma = {sigma} on the geodesic of length {entry.ell}"
    )


def hyperbolic_weight(entry: LengthSpectrumEntry, sigma: MWeight, dim: Dimension) -> complex:
    """L(gamma, sigma) = conj(tr sigma(m_gamma)) e^{-n l} / det(Id - Ad(m_gamma a_gamma)|nbar)."""
    q = math.exp(-entry.ell)
    det = 1.0
    for theta in entry.angles:
        det *= abs(1.0 - q * cmath.exp(1j * theta)) ** 2
    return _sigma_character(entry, sigma, dim).conjugate() * math.exp(-dim.n * entry.ell) / det


def hyperbolic_term(t: float, manifold: ManifoldData, sigmas: Sequence[MWeight]) -> float:
    """H(h_t^nu) with each lambda-integral in closed form sqrt(pi/t) e^{t c} e^{-l^2/4t}."""
    _check_t(t)
    dim = manifold.dim
    total = 0j
    for sigma in sigmas:
        gauss = math.sqrt(math.pi / t) * math.exp(t * float(casimir_sigma(sigma, dim)))
        for entry in manifold.spectrum:
            weight = hyperbolic_weight(entry, sigma, dim)
            total += entry.ell0 / (2.0 * math.pi) * weight * gauss * math.exp(
                -entry.ell ** 2 / (4.0 * t)
            )
    return total.real


def _with_dims(sigmas: Sequence[MWeight], dim: Dimension) -> list:
    return [(sigma, dim_weyl_m(sigma, dim)) for sigma in sigmas]


def parabolic_T_term(t: float, sigmas: Sequence[Tuple[MWeight, int]], dim: Dimension) -> float:
    """T(h_t^nu) = sum_sigma dim(sigma) / (2 pi) sqrt(pi/t) e^{t c(sigma)}."""
    _check_t(t)
    total = 0.0
    for sigma, dim_sigma in sigmas:
        total += dim_sigma * math.exp(t * float(casimir_sigma(sigma, dim)))
    return total * math.sqrt(math.pi / t) / (2.0 * math.pi)


def parabolic_T_expansion(
    sigmas: Sequence[Tuple[MWeight, int]],
    dim: Dimension,
    order: Optional[int] = None,
) -> SmallTimeExpansion:
    """t^{-1/2} sum_{j<=order} b_j t^j from the Taylor series of e^{t c(sigma)}."""
    order = config.PARABOLIC_T_ORDER if order is None else order
    if order < 0:
        raise PreconditionError(f"Expansion order must be nonnegative, got {order}")
    max_beta = Fraction(-1, 2) + order
    total = SmallTimeExpansion()
    for sigma, dim_sigma in sigmas:
        lead = SmallTimeExpansion.single(Fraction(-1, 2), dim_sigma / (2.0 * math.sqrt(math.pi)))
        total = total + lead.times_exponential(casimir_sigma(sigma, dim), max_beta)
    return total


# ============================================================================
# Heat amplitudes
# ============================================================================

def amplitude_normalization(dim: Dimension, exact: bool = False):
    """(4 pi)^{-d/2}."""
    if exact:
        return (4 * sympy.pi) ** sympy.Rational(-dim.d, 2)
    return (4.0 * math.pi) ** (-dim.d / 2)


@dataclass(frozen=True)
class HeatAmplitude:
    """Amplitudes a_i of h_t^nu(n(x)) ~ t^{-d/2} e^{-r^2/4t} sum_i a_i(x) t^i.

    Each a_i is stored as normalization * radial[i](u) with u = |x|^2; for the
    weighted orbital integral only the M-average of a_i matters, and that
    is radial. exact_kernel marks amplitudes read off the closed-form kernel.
    """
    nu: KWeight
    dim: Dimension
    radial: Tuple[TruncatedSeries, ...]
    normalization: float = 0.0
    exact_kernel: bool = False

    def __post_init__(self):
        if not self.radial:
            raise PreconditionError("A heat amplitude needs at least a_0")
        for series in self.radial:
            if series.m != 1:
                raise PreconditionError("Amplitude series must be univariate in u = |x|^2")
        if self.exact_kernel and not (self.dim.n == 1 and all(k == 0 for k in self.nu.k)):
            raise PreconditionError("The closed-form kernel is only available for the trivial K-type in d=3")
        if not self.normalization:
            object.__setattr__(self, "normalization", amplitude_normalization(self.dim))

    @property
    def i_max(self) -> int:
        return len(self.radial) - 1

    @property
    def m(self) -> int:
        return self.dim.d - 1

    def series(self, i: int, degree: int) -> TruncatedSeries:
        """Rational part of a_i as a series on R^{d-1} through total degree."""
        radial = self.radial[i]
        if radial.degree < degree // 2:
            raise PreconditionError(
                f"Amplitude a_{i} has u-degree {radial.degree}, need {degree // 2}"
            )
        return compose_radial(radial, self.m, degree)

    def evaluate(self, i: int, rho) -> np.ndarray:
        """a_i at radius rho (vectorized)."""
        u = np.asarray(rho, dtype=float) ** 2
        return float(self.normalization) * self.radial[i].evaluate(u.reshape(-1, 1)).reshape(u.shape)


def character_series(nu: KWeight, dim: Dimension, order: int) -> TruncatedSeries:
    """tr nu(k(n(x))) as a series in u = |x|^2.

    k(n(x)) rotates one plane by phi with cos(phi/2) = (1 + u/4)^{-1/2}, and
    cos(m phi) = T_{2|m|}(cos(phi/2)) for the Chebyshev polynomials T_k.
    """
    half = half_angle_cosine_series(order)
    mults = rotation_multiplicities(nu, dim)
    top = max(int(2 * abs(m)) for m in mults)
    chebyshev = [TruncatedSeries.constant(1, order, 1), half]
    for _ in range(2, top + 1):
        chebyshev.append((half * chebyshev[-1]).scale(2) - chebyshev[-2])
    total = TruncatedSeries.zero(1, order)
    for m, mult in mults.items():
        total = total + chebyshev[int(2 * abs(m))].scale(mult)
    return total


def leading_radial(nu: KWeight, dim: Dimension, order: int) -> TruncatedSeries:
    """tr nu(k(n(x))) j(x)^{-1/2} in u = |x|^2, without the (4 pi)^{-d/2} factor."""
    order = max(order, 1)
    return character_series(nu, dim, order) * inverse_jacobian_series(dim, order)


def leading_amplitude(
    nu: KWeight,
    dim: Dimension,
    degree: int,
    normalized: bool = True,
) -> TruncatedSeries:
    """Taylor series of a_0(x) = (4 pi)^{-d/2} tr nu(k(n(x))) j(x)^{-1/2} on R^{d-1}."""
    nu.check(dim)
    series = compose_radial(leading_radial(nu, dim, degree // 2), dim.d - 1, degree)
    return series.scale(amplitude_normalization(dim)) if normalized else series


def exact_h3_amplitude(degree: int, i_max: int) -> HeatAmplitude:
    """All amplitudes of the scalar kernel on H^3: a_i = (4 pi)^{-3/2} (r / sinh r) (-1)^i / i!."""
    if i_max < 0:
        raise PreconditionError(f"i_max must be nonnegative, got {i_max}")
    dim = Dimension(1)
    base = inverse_jacobian_series(dim, max(degree // 2, 1))
    radial = tuple(
        base.scale(Fraction((-1) ** i, math.factorial(i))) for i in range(i_max + 1)
    )
    return HeatAmplitude(trivial_weight(KWeight, dim), dim, radial, exact_kernel=True)


def default_amplitude(nu: KWeight, dim: Dimension, order: Optional[int] = None) -> HeatAmplitude:
    """Amplitude model good enough for a T' expansion through the given order.

    The scalar kernel on H^3 is known in closed form; elsewhere only a_0 is
    available without user data.
    """
    order = config.TPRIME_ORDER if order is None else order
    degree = max(config.DEGREE_BUDGET_FACTOR * order, 2)
    if dim.n == 1 and all(k == 0 for k in nu.k):
        return exact_h3_amplitude(degree, max(order // 2, 0))
    return HeatAmplitude(nu, dim, (leading_radial(nu, dim, degree // 2),))


def h3_scalar_kernel(r, t: float):
    """(4 pi t)^{-3/2} (r / sinh r) e^{-t} e^{-r^2/4t} (vectorized in r)."""
    _check_t(t)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise PreconditionError("Distance must be nonnegative")
    safe = np.where(r == 0, 1.0, r)
    # r / sinh r = 2 r e^{-r} / (1 - e^{-2r})
    ratio = np.where(r < 1e-8, 1.0 - r * r / 6.0, 2.0 * safe * np.exp(-safe) / -np.expm1(-2.0 * safe))
    value = (4.0 * math.pi * t) ** -1.5 * ratio * np.exp(-t - r * r / (4.0 * t))
    return float(value) if value.ndim == 0 else value


# ============================================================================
# Weighted parabolic term T'
# ============================================================================

def parabolic_Tprime_expansion(
    amplitude: HeatAmplitude,
    order: Optional[int] = None,
    exact: bool = False,
) -> SmallTimeExpansion:
    """Small-time expansion sum_j (c_j log t + d_j) t^{(j-1)/2} of T'(h_t^nu).

    Amplitude a_i enters through I(1/(4t)) with f = r(x)^2 and g = a_i;
    with lam = 1/(4t) the entry k of that expansion lands at j = 2i + k.
    """
    order = config.TPRIME_ORDER if order is None else order
    if order < 0:
        raise PreconditionError(f"Expansion order must be nonnegative, got {order}")
    if order > 2 * amplitude.i_max + 1:
        raise PreconditionError(
            f"T' expansion through j={order} needs amplitudes up to "
            f"i={order // 2}, have {amplitude.i_max}"
        )
    dim = amplitude.dim
    m = amplitude.m
    degree = max(config.DEGREE_BUDGET_FACTOR * order, 2)
    phase = compose_radial(r_squared_series(max(degree // 2, 1)), m, degree)
    norm = amplitude_normalization(dim, exact) if exact else float(amplitude.normalization)
    log4 = sympy.log(4) if exact else math.log(4.0)

    terms = []
    for i in range(min(amplitude.i_max, order // 2) + 1):
        expansion = expand_log_integral(phase, amplitude.series(i, degree), order - 2 * i, exact)
        for entry in expansion.entries:
            j = 2 * i + entry.k
            beta = Fraction(j - 1, 2)
            scale = 2 ** (m + entry.k) * norm
            terms.append(ExpansionTerm(beta, -entry.a * scale, True))
            terms.append(ExpansionTerm(beta, (entry.b - entry.a * log4) * scale, False))
    result = SmallTimeExpansion(tuple(terms))
    logger.debug(f"T' expansion for nu={amplitude.nu}: {len(result.terms)} terms through j={order}")
    return result


def outer_region_bound(t: float, eps: float, dim: Dimension) -> float:
    """Bound (4 pi)^{-d/2} t^{-d/2} exp(-c(eps) / 8t), c(eps) = arcosh(1 + eps^2/2), for |x| >= eps."""
    _check_t(t)
    c = float(radial_distance(np.array([eps]))[0])
    return amplitude_normalization(dim) * t ** (-dim.d / 2) * math.exp(-c / (8.0 * t))


def tprime_numeric(t: float, amplitude: HeatAmplitude) -> float:
    """T'(h_t^nu) = int h_t^nu(n(x)) log|x| dx by radial quadrature of the amplitude model."""
    _check_t(t)
    dim = amplitude.dim
    m = amplitude.m

    if amplitude.exact_kernel:
        r_max = math.sqrt(4.0 * t * config.KERNEL_DECAY_EXPONENT)
        rho_max = 2.0 * math.sinh(r_max / 2.0)

        def integrand(rho):
            return h3_scalar_kernel(radial_distance(rho), t) * np.log(rho)
    else:
        rho_max = config.AMPLITUDE_CUTOFF
        logger.debug(
            f"Outer region bound at t={t}: {outer_region_bound(t, rho_max, dim):.3e}"
        )

        def integrand(rho):
            r = radial_distance(rho)
            total = np.zeros_like(rho)
            for i in range(amplitude.i_max + 1):
                total = total + t ** i * amplitude.evaluate(i, rho)
            gauss = t ** (-dim.d / 2) * np.exp(-r * r / (4.0 * t))
            return gauss * total * smooth_bump(rho, rho_max) * np.log(rho)

    return radial_quadrature(integrand, rho_max, m)


# ============================================================================
# Assembly
# ============================================================================

@dataclass(frozen=True)
class GeometricTerms:
    """The four distributions at one t; total = I + H + C1 T + C2 T'."""
    t: float
    identity: float
    hyperbolic: float
    parabolic: float
    weighted: float
    total: float


def geometric_terms(
    t: float,
    manifold: ManifoldData,
    nu: KWeight,
    amplitude: Optional[HeatAmplitude] = None,
) -> GeometricTerms:
    _check_t(t)
    dim = manifold.dim
    nu.check(dim)
    sigmas = restrictions(nu, dim)
    identity = identity_numeric(t, manifold.volume, [(s, 1) for s in sigmas], dim, manifold.c_n)
    hyperbolic = hyperbolic_term(t, manifold, sigmas)
    parabolic = weighted = 0.0
    if manifold.kappa > 0:
        parabolic = parabolic_T_term(t, _with_dims(sigmas, dim), dim)
        amplitude = amplitude or default_amplitude(nu, dim)
        weighted = tprime_numeric(t, amplitude)
    total = identity + hyperbolic + manifold.C1 * parabolic + manifold.C2 * weighted
    return GeometricTerms(t, identity, hyperbolic, parabolic, weighted, total)


def geometric_side(
    t: float,
    manifold: ManifoldData,
    nu: KWeight,
    amplitude: Optional[HeatAmplitude] = None,
) -> float:
    """Regularized trace of exp(-t A_nu) from the geometric side."""
    return geometric_terms(t, manifold, nu, amplitude).total


def geometric_expansion(
    manifold: ManifoldData,
    nu: KWeight,
    amplitude: Optional[HeatAmplitude] = None,
    identity_order: Optional[int] = None,
    t_order: Optional[int] = None,
    tprime_order: Optional[int] = None,
    exact: bool = False,
) -> SmallTimeExpansion:
    """Small-time expansion of I + C1 T + C2 T' (H is O(e^{-c/t}))."""
    dim = manifold.dim
    nu.check(dim)
    sigmas = restrictions(nu, dim)
    total = identity_expansion(
        manifold.volume, [(s, 1) for s in sigmas], dim, manifold.c_n, identity_order, exact
    )
    if manifold.kappa > 0:
        total = total + parabolic_T_expansion(_with_dims(sigmas, dim), dim, t_order).scale(
            manifold.C1
        )
        tprime_order = config.TPRIME_ORDER if tprime_order is None else tprime_order
        amplitude = amplitude or default_amplitude(nu, dim, tprime_order)
        usable = min(tprime_order, 2 * amplitude.i_max + 1)
        if usable < tprime_order:
            logger.warning(
                f"Amplitudes known up to i={amplitude.i_max}; T' expanded through j={usable} only"
            )
        total = total + parabolic_Tprime_expansion(amplitude, usable, exact).scale(manifold.C2)

    total.check_dimension(dim)
    log_zero = total.coefficient(0, True)
    if abs(float(log_zero)) > config.HOLOMORPHY_TOLERANCE:
        raise HolomorphyError(float(log_zero))
    return total


def bochner_shift(value: float, nu: KWeight, dim: Dimension, t: float) -> float:
    """Trace of exp(-t Delta_nu) = e^{-t nu(Omega_K)} times the trace of exp(-t A_nu)."""
    _check_t(t)
    return math.exp(-t * float(casimir_nu(nu, dim))) * value
