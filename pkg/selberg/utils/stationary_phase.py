"""Asymptotics of Laplace integrals with a logarithmic weight, and a quadrature oracle.

I(lam) = int exp(-lam f(x)) g(x) log|x| dx with f = |x|^2 + R(x), R = O(|x|^4).
Expanding exp(-lam R) and integrating monomials against the Gaussian gives

    I(lam) ~ sum_k (a_k log(lam) + b_k) lam^{-m/2 - k/2}.
"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Callable, List, Optional, Tuple

import numpy as np
import sympy
from numpy.polynomial.legendre import leggauss

from selberg.config import config
from selberg.data.models import LogEntry, LogExpansion
from selberg.utils.helpers import (
    DegreeBudgetError,
    DimensionMismatchError,
    PreconditionError,
    QuadratureError,
)
from selberg.utils.series import TruncatedSeries, gauss_log_moment, gauss_moment

logger = logging.getLogger(__name__)


def _quadratic_form(m: int, degree: int) -> TruncatedSeries:
    terms = {tuple(2 if j == i else 0 for j in range(m)): Fraction(1) for i in range(m)}
    return TruncatedSeries(m, degree, terms)


def split_phase(f: TruncatedSeries) -> TruncatedSeries:
    """Check f = |x|^2 + R with R of valuation >= 4 and return R."""
    if f.degree < 2:
        raise PreconditionError(f"Phase series degree {f.degree} cannot carry |x|^2")
    remainder = f - _quadratic_form(f.m, f.degree)
    valuation = remainder.valuation()
    if valuation is not None and valuation < 4:
        raise PreconditionError(
            f"Phase must be |x|^2 + O(|x|^4); remainder has a term of degree {valuation}"
        )
    return remainder


def expand_log_integral(
    f: TruncatedSeries,
    g: TruncatedSeries,
    order: int,
    exact: bool = False,
) -> LogExpansion:
    """Expansion of I(lam) through lam^{-m/2 - order/2}.

    Term j of exp(-lam R) contributes (-1)^j lam^j R^j g / j!; a monomial
    c x^alpha in it integrates to c lam^j scaled_log_moment(alpha), which lands
    at k = |alpha| - 2j.

    Args:
        f: Phase series, exactly |x|^2 + R with R = O(|x|^4)
        g: Amplitude series in the same variables
        order: Last expansion index N
        exact: Keep coefficients as sympy expressions in pi, gamma, log 2

    Returns:
        LogExpansion with entries k = 0, ..., N
    """
    if order < 0:
        raise PreconditionError(f"Expansion order must be nonnegative, got {order}")
    if f.m != g.m:
        raise DimensionMismatchError(f.m, g.m, "variables in the amplitude")
    factor = config.DEGREE_BUDGET_FACTOR
    for series in (f, g):
        if series.degree < factor * order:
            raise DegreeBudgetError(series.degree, order, factor)

    m = f.m
    remainder = split_phase(f)
    work_degree = 2 * order
    remainder = remainder.truncate(work_degree)
    term = g.truncate(work_degree)

    zero = sympy.Integer(0) if exact else 0.0
    log_coeffs = [zero] * (order + 1)
    const_coeffs = [zero] * (order + 1)

    for j in range(order // 2 + 1):
        for alpha, c in term.items():
            k = sum(alpha) - 2 * j
            if k < 0 or k > order:
                continue
            moment = gauss_moment(alpha, exact)
            if moment == 0:
                continue
            log_moment = gauss_log_moment(alpha, m, exact)
            c = (sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction) else c) \
                if exact else float(c)
            log_coeffs[k] = log_coeffs[k] - c * moment / 2
            const_coeffs[k] = const_coeffs[k] + c * log_moment
        term = (term * remainder).scale(Fraction(-1, j + 1))

    if exact:
        log_coeffs = [sympy.expand(a) for a in log_coeffs]
        const_coeffs = [sympy.expand(b) for b in const_coeffs]
    entries = tuple(LogEntry(k, log_coeffs[k], const_coeffs[k]) for k in range(order + 1))
    return LogExpansion(m, entries)


def evaluate_expansion(expansion: LogExpansion, lam: float) -> float:
    """sum_k (a_k log(lam) + b_k) lam^{-m/2 - k/2}."""
    if lam <= 0:
        raise PreconditionError(f"lambda must be positive, got {lam}")
    log_lam = math.log(lam)
    total = 0.0
    for entry in expansion.entries:
        total += (float(entry.a) * log_lam + float(entry.b)) * lam ** (-(expansion.m + entry.k) / 2)
    return total


# ============================================================================
# Quadrature
# ============================================================================

def smooth_bump(rho, eps: float):
    """C^2 cutoff: 1 on rho <= eps/2, 0 on rho >= eps, quintic smoothstep between."""
    rho = np.asarray(rho, dtype=float)
    s = np.clip((rho - eps / 2) / (eps / 2), 0.0, 1.0)
    return 1.0 - s * s * s * (10.0 - 15.0 * s + 6.0 * s * s)


def sphere_area(m: int) -> float:
    """Area of the unit sphere S^{m-1} in R^m."""
    return 2.0 * math.pi ** (m / 2) / math.gamma(m / 2)


def _radial_panels(rho_max: float, depth: int, nodes: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Gauss-Legendre panels on [0, rho_max], graded with ratio 1/2 toward 0.

    Panels are listed outermost first; the last one is [0, rho_max 2^-depth].
    """
    x, w = leggauss(nodes)
    edges = rho_max * 0.5 ** np.arange(depth + 1)
    bounds = [(edges[i + 1], edges[i]) for i in range(depth)] + [(0.0, edges[depth])]
    panels = []
    for lo, hi in bounds:
        half = 0.5 * (hi - lo)
        panels.append((lo + half * (x + 1.0), half * w))
    return panels


def _sphere_rule(m: int, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Directions and weights on S^{m-1}; the weights sum to its area."""
    if m == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    count = 2 * nodes
    phi = 2.0 * math.pi * np.arange(count) / count
    phi_w = np.full(count, 2.0 * math.pi / count)
    x, w = leggauss(nodes)
    theta = 0.5 * math.pi * (x + 1.0)
    theta_w = 0.5 * math.pi * w

    directions, weights = [], []
    for combo in itertools.product(range(nodes), repeat=m - 2):
        angles = [theta[i] for i in combo]
        weight = 1.0
        for position, i in enumerate(combo):
            weight *= theta_w[i] * math.sin(theta[i]) ** (m - 2 - position)
        prefix = 1.0
        coords = []
        for angle in angles:
            coords.append(prefix * math.cos(angle))
            prefix *= math.sin(angle)
        for p, pw in zip(phi, phi_w):
            directions.append(coords + [prefix * math.cos(p), prefix * math.sin(p)])
            weights.append(weight * pw)
    return np.array(directions), np.array(weights)


def _refine(compute: Callable[[int, int, int], float], tolerance: float) -> float:
    """Double depth and nodes until two successive values agree."""
    depth = config.ORACLE_RADIAL_DEPTH
    nodes = config.ORACLE_GAUSS_NODES
    angular = config.ORACLE_ANGULAR_NODES
    previous = compute(depth, nodes, angular)
    while True:
        depth, nodes, angular = 2 * depth, 2 * nodes, 2 * angular
        current = compute(depth, nodes, angular)
        estimate = current - previous
        logger.debug(f"Quadrature refinement: depth={depth} nodes={nodes} change={estimate:.3e}")
        if abs(estimate) <= tolerance * max(1.0, abs(current)):
            return current
        if 2 * depth > config.ORACLE_PANEL_BUDGET:
            raise QuadratureError(abs(estimate), depth)
        previous = current


def radial_quadrature(
    func: Callable[[np.ndarray], np.ndarray],
    rho_max: float,
    m: int,
    tolerance: Optional[float] = None,
) -> float:
    """|S^{m-1}| int_0^{rho_max} func(rho) rho^{m-1} d rho on graded panels."""
    tolerance = config.ORACLE_TOLERANCE if tolerance is None else tolerance
    area = sphere_area(m)

    def compute(depth: int, nodes: int, _angular: int) -> float:
        total = 0.0
        for rho, weights in _radial_panels(rho_max, depth, nodes):
            total += float(np.dot(weights, func(rho) * rho ** (m - 1)))
        return area * total

    return _refine(compute, tolerance)


def quadrature_oracle(
    f_eval: Callable[[np.ndarray], np.ndarray],
    g_eval: Callable[[np.ndarray], np.ndarray],
    lam: float,
    m: int,
    eps: Optional[float] = None,
    tolerance: Optional[float] = None,
) -> float:
    """Direct evaluation of int_{|x| < eps} exp(-lam f) g log|x| dx in polar coordinates.

    f_eval and g_eval take points of shape (P, m) and return shape (P,).
    """
    if lam <= 0:
        raise PreconditionError(f"lambda must be positive, got {lam}")
    eps = config.ORACLE_CUTOFF if eps is None else eps
    if eps <= 0:
        raise PreconditionError(f"Cutoff radius must be positive, got {eps}")
    tolerance = config.ORACLE_TOLERANCE if tolerance is None else tolerance

    def compute(depth: int, nodes: int, angular: int) -> float:
        directions, dir_weights = _sphere_rule(m, angular)
        total = 0.0
        for rho, weights in _radial_panels(eps, depth, nodes):
            points = (rho[:, None, None] * directions[None, :, :]).reshape(-1, m)
            values = np.exp(-lam * f_eval(points)) * g_eval(points)
            values = values.reshape(rho.size, directions.shape[0]) @ dir_weights
            total += float(np.dot(weights, values * np.log(rho) * rho ** (m - 1)))
        return total

    value = _refine(compute, tolerance)
    logger.debug(f"Oracle at lambda={lam}: {value:.17g}")
    return value
