from __future__ import annotations

import math

import numpy as np
import pytest

from selberg.utils.geometry import (
    cartan_k,
    half_angle_cosine_series,
    hyp_distance,
    inverse_jacobian_series,
    jacobian,
    n_matrix,
    radial_distance,
    rotation_angle,
    y_matrix,
)
from selberg.utils.helpers import PreconditionError
from selberg.utils.rep_theory import Dimension

D3 = Dimension.from_d(3)
D5 = Dimension.from_d(5)


def _lorentz_form(size: int) -> np.ndarray:
    form = np.eye(size)
    form[-1, -1] = -1.0
    return form


def test_hyp_distance() -> None:
    assert hyp_distance([2.0, 0.0]) == pytest.approx(math.log(3 + 2 * math.sqrt(2)), rel=1e-14)
    assert hyp_distance([2.0, 0.0]) == pytest.approx(1.762747, abs=1e-6)
    assert hyp_distance([0.0, 0.0]) == 0.0


def test_radial_distance_small_argument() -> None:
    rho = np.array([1e-9, 1e-5, 1e-3, 0.1])
    expected = 2.0 * np.arcsinh(rho / 2.0)
    np.testing.assert_allclose(radial_distance(rho), expected, rtol=1e-13)


def test_jacobian() -> None:
    assert jacobian(1.0, D3) == pytest.approx(math.sinh(1.0) ** 2, rel=1e-14)
    assert jacobian(1.0, D3) == pytest.approx(1.38109, abs=1e-5)
    assert jacobian(0.0, D5) == 1.0
    with pytest.raises(PreconditionError):
        jacobian(-1.0, D3)


def test_y_matrix_is_nilpotent_and_in_the_lie_algebra() -> None:
    x = np.array([0.3, -1.2, 0.7, 2.0])
    y = y_matrix(x)
    np.testing.assert_allclose(y @ y @ y, 0.0, atol=1e-12)
    form = _lorentz_form(y.shape[0])
    np.testing.assert_allclose(form @ y + (form @ y).T, 0.0, atol=1e-12)


def test_n_matrix_is_a_homomorphism() -> None:
    x = np.array([0.4, -0.9])
    z = np.array([1.5, 0.2])
    np.testing.assert_allclose(n_matrix(x) @ n_matrix(z), n_matrix(x + z), atol=1e-12)
    form = _lorentz_form(4)
    g = n_matrix(x)
    np.testing.assert_allclose(g.T @ form @ g, form, atol=1e-12)


@pytest.mark.parametrize("x", [[0.5, 0.0], [1.0, -2.0], [3.0, 0.25]])
def test_cartan_k_is_a_plane_rotation(x: list) -> None:
    k = cartan_k(n_matrix(x))
    np.testing.assert_allclose(k @ k.T, np.eye(4), atol=1e-10)
    phi = rotation_angle(x)
    d = 3
    assert np.trace(k) == pytest.approx(d - 1 + 2 * math.cos(phi), abs=1e-10)


def test_rotation_angle() -> None:
    assert rotation_angle([2.0, 0.0]) == pytest.approx(math.pi / 2)
    assert rotation_angle([0.0, 0.0]) == 0.0


def test_half_angle_cosine_series() -> None:
    coeffs = half_angle_cosine_series(10).univariate_coefficients()
    u = 0.2
    value = sum(float(c) * u ** k for k, c in enumerate(coeffs))
    assert value == pytest.approx(math.cos(rotation_angle([math.sqrt(u)]) / 2), rel=1e-12)


@pytest.mark.parametrize("dim", [D3, D5])
def test_inverse_jacobian_series(dim: Dimension) -> None:
    coeffs = inverse_jacobian_series(dim, 12).univariate_coefficients()
    rho = 0.3
    value = sum(float(c) * (rho * rho) ** k for k, c in enumerate(coeffs))
    r = float(radial_distance(np.array([rho]))[0])
    assert value == pytest.approx(jacobian(r, dim) ** -0.5, rel=1e-12)
