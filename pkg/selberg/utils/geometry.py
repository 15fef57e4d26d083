"""Hyperbolic geometry along the nilpotent slice: n(x), distance, Jacobian, Cartan K-part."""

import logging
import math
from fractions import Fraction

import numpy as np

from selberg.config import config
from selberg.utils.helpers import DimensionMismatchError, PreconditionError
from selberg.utils.rep_theory import Dimension
from selberg.utils.series import TruncatedSeries

logger = logging.getLogger(__name__)


def y_matrix(x) -> np.ndarray:
    """Y(x) in so(d,1) for x in R^{d-1}; the last coordinate is timelike."""
    x = np.asarray(x, dtype=float)
    m = x.shape[0]
    y = np.zeros((m + 2, m + 2))
    y[:m, m] = -x
    y[:m, m + 1] = x
    y[m, :m] = x
    y[m + 1, :m] = x
    return y


def n_matrix(x) -> np.ndarray:
    """n(x) = Id + Y(x) + Y(x)^2 / 2 (Y(x) is nilpotent of order 3)."""
    y = y_matrix(x)
    return np.eye(y.shape[0]) + y + 0.5 * (y @ y)


def _arcosh_one_plus(v: np.ndarray) -> np.ndarray:
    """arcosh(1 + v) for v >= 0 without cancellation near v = 0."""
    v = np.asarray(v, dtype=float)
    out = np.empty_like(v)
    small = v < config.ARCOSH_SERIES_SWITCH
    # sqrt(2v) (1 - v/12 + 3v^2/160 - 5v^3/896 + 35v^4/18432)
    vs = v[small]
    out[small] = np.sqrt(2.0 * vs) * (
        1.0 + vs * (-1.0 / 12 + vs * (3.0 / 160 + vs * (-5.0 / 896 + vs * 35.0 / 18432)))
    )
    vl = v[~small]
    out[~small] = np.log1p(vl + np.sqrt(vl * (2.0 + vl)))
    return out


def radial_distance(rho):
    """r = arcosh(1 + rho^2 / 2) for norms rho (vectorized)."""
    rho = np.asarray(rho, dtype=float)
    return _arcosh_one_plus(0.5 * rho * rho)


def hyp_distance(x) -> float:
    """Hyperbolic distance from the base point to n(x) x0."""
    norm = float(np.linalg.norm(np.asarray(x, dtype=float)))
    return float(radial_distance(np.array([norm]))[0])


def jacobian(r, dim: Dimension):
    """Jacobian (sinh r / r)^{d-1} of the exponential map in geodesic polar coordinates."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise PreconditionError("Distance must be nonnegative")
    ratio = np.where(r < 1e-8, 1.0 + r * r / 6.0, np.sinh(r) / np.where(r == 0, 1.0, r))
    value = ratio ** (dim.d - 1)
    return float(value) if value.ndim == 0 else value


def rotation_angle(x) -> float:
    """Rotation angle of k(n(x)): 2 arctan(|x| / 2)."""
    return 2.0 * math.atan(float(np.linalg.norm(np.asarray(x, dtype=float))) / 2.0)


def cartan_k(g) -> np.ndarray:
    """Rotation part k(g) of g = exp(Y(g)) k(g), via (g g^T)^{-1/2} g."""
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionMismatchError(2, g.ndim, "matrix axes of a square matrix")
    eigenvalues, vectors = np.linalg.eigh(g @ g.T)
    if eigenvalues[0] <= 1e-14 * max(eigenvalues[-1], 1.0):
        raise PreconditionError("Matrix is not invertible")
    inv_sqrt = (vectors / np.sqrt(eigenvalues)) @ vectors.T
    return inv_sqrt @ g


# ============================================================================
# Radial series in u = |x|^2
# ============================================================================

def r_squared_series(order: int) -> TruncatedSeries:
    """Taylor series of arcosh(1 + u/2)^2 in u through degree order.

    arcosh(1 + u/2) = 2 asinh(sqrt(u)/2), and
    4 asinh(y)^2 = sum_k (-1)^{k+1} 2 ((k-1)!)^2 / (2k)! (2y)^{2k}.
    """
    if order < 1:
        raise PreconditionError(f"Series order must be at least 1, got {order}")
    coeffs = [Fraction(0)]
    for k in range(1, order + 1):
        c = Fraction(2 * math.factorial(k - 1) ** 2, math.factorial(2 * k))
        coeffs.append(c if k % 2 else -c)
    return TruncatedSeries.univariate(coeffs, order)


def sinhc_series(order: int) -> TruncatedSeries:
    """sinh(r) / r as a series in r^2."""
    return TruncatedSeries.univariate(
        [Fraction(1, math.factorial(2 * k + 1)) for k in range(order + 1)], order
    )


def inverse_jacobian_series(dim: Dimension, order: int) -> TruncatedSeries:
    """j^{-1/2} = (sinh r / r)^{-(d-1)/2} as a series in u = |x|^2."""
    in_r2 = sinhc_series(order).power(Fraction(-(dim.d - 1), 2))
    return in_r2.compose(r_squared_series(order))


def half_angle_cosine_series(order: int) -> TruncatedSeries:
    """cos(phi/2) = (1 + u/4)^{-1/2} for phi = 2 arctan(|x|/2), in u = |x|^2."""
    base = TruncatedSeries.univariate([Fraction(1), Fraction(1, 4)], order)
    return base.power(Fraction(-1, 2))
