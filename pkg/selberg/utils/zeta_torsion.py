"""Zeta regularization of heat traces, regularized determinants and analytic torsion."""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Sequence

import numpy as np
from scipy import integrate

from selberg.config import config
from selberg.data.models import (
    DegreeInput,
    SmallTimeExpansion,
    SpectralData,
    TorsionInput,
)
from selberg.utils.helpers import (
    HolomorphyError,
    PreconditionError,
    ordered_map,
)
from selberg.utils.rep_theory import Dimension, GWeight, casimir_tau

logger = logging.getLogger(__name__)

EULER_GAMMA = float(np.euler_gamma)


# ============================================================================
# Spectral side
# ============================================================================

def regularized_trace_spectral(t: float, spectral: SpectralData) -> float:
    """Spectral side of the regularized trace at t.

    sum_j mult_j e^{-t lam_j} + sum_i c_zero_i / 4 e^{-t shift_i}
    - 1/(4 pi) sum_i e^{-t shift_i} int e^{-t lam^2} values_i(lam) d lam,
    the last integral by the trapezoid rule on the sampled grid.
    """
    if t <= 0:
        raise PreconditionError(f"t must be positive, got {t}")
    total = 0.0
    for lam, mult in spectral.eigenvalues:
        total += mult * math.exp(-t * lam)
    cont = spectral.continuous
    if cont is not None:
        weight = np.exp(-t * cont.grid ** 2)
        for i, shift in enumerate(cont.shifts):
            decay = math.exp(-t * shift)
            total += cont.c_zero[i] / 4.0 * decay
            total -= decay * integrate.trapezoid(weight * cont.values[i], cont.grid) / (4.0 * math.pi)
    return total


def spectral_expansion(spectral: SpectralData) -> SmallTimeExpansion:
    """A spectral model is bounded as t -> 0; its expansion is the constant term."""
    return SmallTimeExpansion.single(0, spectral.constant_term())


def hodge_shift(trace_value: float, tau: GWeight, dim: Dimension, t: float) -> float:
    """Trace of exp(-t Delta_p(tau)) = e^{-t tau(Omega)} times the trace of exp(-t A)."""
    if t <= 0:
        raise PreconditionError(f"t must be positive, got {t}")
    return math.exp(-t * float(casimir_tau(tau, dim))) * trace_value


def hodge_shift_expansion(
    expansion: SmallTimeExpansion,
    tau: GWeight,
    dim: Dimension,
    max_beta=None,
) -> SmallTimeExpansion:
    """Expansion times e^{-t tau(Omega)}, re-expanded through max_beta.

    The default keeps every term with beta <= 0 plus one more order, so the
    zeta computation sees all singular terms the shift creates.
    """
    expansion.check_dimension(dim)
    if max_beta is None:
        top = expansion.max_beta if expansion.terms else 0
        max_beta = max(top, 0) + 1
    return expansion.times_exponential(-casimir_tau(tau, dim), max_beta)


# ============================================================================
# Zeta functions
# ============================================================================

@dataclass(frozen=True)
class ZetaResult:
    zeta0: float
    zeta_prime0: float
    tail_bound: float = 0.0

    @property
    def det(self) -> float:
        return regularized_det(self.zeta_prime0)


def _quad(func: Callable[[float], float], a: float, b: float) -> float:
    tolerance = config.ZETA_TOLERANCE
    value, error = integrate.quad(func, a, b, epsabs=tolerance / 10, epsrel=tolerance / 10, limit=400)
    logger.debug(f"Mellin piece on [{a:.4g}, {b:.4g}]: {value:.17g} (error {error:.2e})")
    return value


def zeta_values(
    trace_eval: Callable[[float], float],
    expansion: SmallTimeExpansion,
    h: float = 0.0,
    tail_coeffs: Sequence[float] = (),
    t_max: Optional[float] = None,
) -> ZetaResult:
    """zeta(0) and zeta'(0) for zeta(s) = 1/Gamma(s) int_0^oo t^{s-1} (Tr(t) - h) dt.

    On (0, 1] the expansion terms with beta <= 0 are removed and integrated in
    closed form: int_0^1 t^{s-1+beta} dt = 1/(s+beta) and the log term gives
    -1/(s+beta)^2. With 1/Gamma(s) = s + gamma s^2 + O(s^3) this leaves

        zeta(0) = c_0,   zeta'(0) = gamma c_0 + H(0)

    where c_0 is the t^0 coefficient (after subtracting h) and H(0) collects
    the finite parts.

    Args:
        trace_eval: t -> Tr(t)
        expansion: Small-time expansion of Tr on (0, 1]
        h: Kernel dimension, the large-time limit of Tr
        tail_coeffs: c_1, c_2, ... with Tr(t) - h ~ sum_j c_j t^{-j/2} beyond t_max
        t_max: Truncation point of the large-time integral

    Raises:
        HolomorphyError: The expansion has a t^0 log t term
    """
    t_max = config.ZETA_T_MAX if t_max is None else t_max
    if t_max <= 1:
        raise PreconditionError(f"t_max must exceed 1, got {t_max}")

    shifted = expansion + SmallTimeExpansion.single(0, -h)
    log_zero = float(shifted.coefficient(0, True))
    if abs(log_zero) > config.HOLOMORPHY_TOLERANCE:
        raise HolomorphyError(log_zero)

    singular = [term for term in shifted.terms if term.beta <= 0]
    regular = [term for term in shifted.terms if term.beta > 0]
    c0 = float(shifted.coefficient(0, False))

    finite = 0.0
    for term in singular:
        if term.beta == 0:
            continue
        beta = float(term.beta)
        c = float(term.coeff)
        finite += -c / beta ** 2 if term.has_log else c / beta

    def remainder(t: float) -> float:
        value = trace_eval(t) - h
        log_t = math.log(t)
        for term in singular:
            part = float(term.coeff) * t ** float(term.beta)
            value -= part * log_t if term.has_log else part
        return value

    if all(term.beta >= 0 for term in singular):
        # Tr is bounded near 0, so the remainder / t is integrable down to 0.
        small = _quad(lambda t: remainder(t) / t, 0.0, 1.0)
    else:
        t0 = config.ZETA_SMALL_T
        log_t0 = math.log(t0)
        small = 0.0
        for term in regular:
            beta = float(term.beta)
            c = float(term.coeff)
            power = t0 ** beta
            small += c * power * (log_t0 / beta - 1.0 / beta ** 2) if term.has_log else c * power / beta
        left = remainder(t0) - sum(
            float(term.coeff) * t0 ** float(term.beta) * (log_t0 if term.has_log else 1.0)
            for term in regular
        )
        logger.debug(f"Unmodelled remainder at t={t0}: {left:.3e}")
        small += _quad(lambda s: remainder(math.exp(s)), log_t0, 0.0)

    large = _quad(lambda s: trace_eval(math.exp(s)) - h, 0.0, math.log(t_max))

    tail = 0.0
    for j, c in enumerate(tail_coeffs, start=1):
        tail += c * (2.0 / j) * t_max ** (-j / 2)
    tail_bound = abs(trace_eval(t_max) - h) / t_max if not tail_coeffs else 0.0
    if tail_bound > config.ZETA_TOLERANCE:
        logger.warning(f"Large-time tail beyond t={t_max} may be {tail_bound:.2e}; pass tail coefficients")
    else:
        logger.debug(f"Large-time tail bound {tail_bound:.2e}")

    zeta0 = c0
    zeta_prime0 = EULER_GAMMA * c0 + finite + small + large + tail
    return ZetaResult(zeta0, zeta_prime0, tail_bound)


def regularized_det(zeta_prime0: float) -> float:
    """exp(-zeta'(0))."""
    return math.exp(-zeta_prime0)


# ============================================================================
# Torsion
# ============================================================================

def torsion_assembly(dets: Mapping[int, float], d: int) -> float:
    """log T_X = sum_{p=1}^{d} (-1)^{p+1} (p/2) log det_p."""
    total = 0.0
    for p in range(1, d + 1):
        if p not in dets:
            raise PreconditionError(f"Missing determinant for p={p}")
        det = dets[p]
        if det <= 0:
            raise PreconditionError(f"Determinant for p={p} must be positive, got {det}")
        total += (-1) ** (p + 1) * p / 2.0 * math.log(det)
    return total


def alternating_heat_trace(traces: Mapping[int, Callable[[float], float]], d: int) -> Callable[[float], float]:
    """K(t) = sum_p (-1)^p p Tr_p(t)."""
    missing = [p for p in range(1, d + 1) if p not in traces]
    if missing:
        raise PreconditionError(f"Missing heat traces for p={missing}")

    def kernel(t: float) -> float:
        return sum((-1) ** p * p * traces[p](t) for p in range(1, d + 1))

    return kernel


def alternating_expansion(expansions: Mapping[int, SmallTimeExpansion], d: int) -> SmallTimeExpansion:
    """sum_p (-1)^p p E_p."""
    total = SmallTimeExpansion()
    for p in range(1, d + 1):
        total = total + expansions[p].scale((-1) ** p * p)
    return total


def torsion_from_kernel(
    kernel_eval: Callable[[float], float],
    kernel_expansion: SmallTimeExpansion,
    h_alt: float = 0.0,
    tail_coeffs: Sequence[float] = (),
) -> float:
    """log T_X = zeta_K'(0) / 2 for the alternating trace K(t)."""
    return zeta_values(kernel_eval, kernel_expansion, h_alt, tail_coeffs).zeta_prime0 / 2.0


@dataclass
class TorsionReport:
    """Per-degree zeta data and the assembled log T_X."""
    d: int
    zeta0: Dict[int, Optional[float]] = field(default_factory=dict)
    zeta_prime0: Dict[int, Optional[float]] = field(default_factory=dict)
    dets: Dict[int, float] = field(default_factory=dict)
    log_torsion: float = 0.0

    def to_json(self) -> dict:
        degrees = range(1, self.d + 1)
        return {
            "zeta0": [self.zeta0[p] for p in degrees],
            "zetaPrime0": [self.zeta_prime0[p] for p in degrees],
            "dets": [self.dets[p] for p in degrees],
            "logT": self.log_torsion,
        }


def compute_torsion(inputs: TorsionInput, d: int, workers: Optional[int] = None) -> TorsionReport:
    """Determinants per degree (given, or through zeta_values) and log T_X."""
    workers = config.WORKERS if workers is None else workers
    degrees = list(range(1, d + 1))
    missing = [p for p in degrees if p not in inputs.degrees]
    if missing:
        raise PreconditionError(f"Missing torsion input for p={missing}")

    def solve(p: int) -> Optional[ZetaResult]:
        entry: DegreeInput = inputs.degrees[p]
        if entry.det is not None:
            return None
        return zeta_values(entry.trace_eval, entry.expansion, entry.h, entry.tail_coeffs)

    results = ordered_map(solve, degrees, workers)
    report = TorsionReport(d)
    for p, result in zip(degrees, results):
        if result is None:
            report.zeta0[p] = None
            report.zeta_prime0[p] = None
            report.dets[p] = float(inputs.degrees[p].det)
        else:
            report.zeta0[p] = result.zeta0
            report.zeta_prime0[p] = result.zeta_prime0
            report.dets[p] = result.det
        logger.info(f"Degree {p}: det = {report.dets[p]:.17g}")
    report.log_torsion = torsion_assembly(report.dets, d)
    return report
