from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
import sympy

from selberg.config import config
from selberg.utils.geometry import jacobian, r_squared_series, radial_distance
from selberg.utils.helpers import DegreeBudgetError, PreconditionError, QuadratureError
from selberg.utils.rep_theory import Dimension, KWeight, rotation_character
from selberg.utils.series import TruncatedSeries, compose_radial
from selberg.utils.stationary_phase import (
    evaluate_expansion,
    expand_log_integral,
    quadrature_oracle,
    radial_quadrature,
    smooth_bump,
    sphere_area,
    split_phase,
)
from selberg.utils.trace_formula import leading_amplitude

EULER = float(np.euler_gamma)


def _square_norm(m: int, degree: int) -> TruncatedSeries:
    return TruncatedSeries(m, degree, {tuple(2 if j == i else 0 for j in range(m)): Fraction(1) for i in range(m)})


def _quartic_phase(degree: int) -> TruncatedSeries:
    return TruncatedSeries(1, degree, {(2,): Fraction(1), (4,): Fraction(1)})


def test_leading_coefficients_in_the_plane() -> None:
    f = _square_norm(2, 2)
    g = TruncatedSeries.constant(2, 2, 1)
    entry = expand_log_integral(f, g, 0).entries[0]
    assert entry.a == pytest.approx(-math.pi / 2)
    assert entry.b == pytest.approx(-math.pi * EULER / 2)


def test_leading_coefficients_exact() -> None:
    f = _square_norm(2, 6)
    g = TruncatedSeries.constant(2, 6, 1)
    expansion = expand_log_integral(f, g, 2, exact=True)
    assert sympy.simplify(expansion.entries[0].a + sympy.pi / 2) == 0
    assert sympy.simplify(expansion.entries[0].b + sympy.pi * sympy.EulerGamma / 2) == 0
    assert expansion.entries[1].a == 0 and expansion.entries[2].b == 0


def test_odd_amplitude_gives_zero() -> None:
    f = _square_norm(2, 6)
    g = TruncatedSeries.variable(2, 6, 0) + TruncatedSeries(2, 6, {(2, 1): Fraction(3)})
    for entry in expand_log_integral(f, g, 2).entries:
        assert entry.a == 0 and entry.b == 0


def test_lower_orders_are_stable() -> None:
    f = _quartic_phase(12)
    g = TruncatedSeries(1, 12, {(0,): Fraction(1), (2,): Fraction(-1, 3)})
    low = expand_log_integral(f, g, 2)
    high = expand_log_integral(f, g, 4)
    for k in range(3):
        assert low.entries[k].a == pytest.approx(high.entries[k].a, rel=1e-14, abs=1e-300)
        assert low.entries[k].b == pytest.approx(high.entries[k].b, rel=1e-14, abs=1e-300)


def test_expansion_matches_oracle() -> None:
    lam = 1000.0
    f = _quartic_phase(12)
    g = TruncatedSeries.constant(1, 12, 1)

    def f_eval(x):
        return x[:, 0] ** 2 + x[:, 0] ** 4

    def g_eval(x):
        return np.ones(x.shape[0])

    oracle = quadrature_oracle(f_eval, g_eval, lam, 1)
    leading = abs(oracle - evaluate_expansion(expand_log_integral(f, g, 0), lam))
    full = abs(oracle - evaluate_expansion(expand_log_integral(f, g, 4), lam))
    assert full < 1e-3 * leading


def test_oracle_gaussian_disc() -> None:
    lam = 40.0
    expected = (-math.pi * EULER / 2 - math.pi * math.log(lam) / 2) / lam

    def f_eval(x):
        return np.sum(x * x, axis=1)

    def g_eval(x):
        return np.ones(x.shape[0])

    value = quadrature_oracle(f_eval, g_eval, lam, 2, eps=1.5)
    assert value == pytest.approx(expected, rel=1e-10)


def test_phase_must_be_quadratic_plus_quartic() -> None:
    bad = _square_norm(1, 6) + TruncatedSeries(1, 6, {(3,): Fraction(1)})
    with pytest.raises(PreconditionError):
        split_phase(bad)
    assert split_phase(_quartic_phase(6)).terms == {(4,): 1}


def test_degree_budget() -> None:
    f = _quartic_phase(4)
    g = TruncatedSeries.constant(1, 4, 1)
    with pytest.raises(DegreeBudgetError):
        expand_log_integral(f, g, 2)
    with pytest.raises(PreconditionError):
        expand_log_integral(f, g, -1)


def test_smooth_bump() -> None:
    values = smooth_bump(np.array([0.0, 0.25, 0.5, 0.75, 1.0, 2.0]), 1.0)
    np.testing.assert_allclose(values, [1.0, 1.0, 1.0, 0.5, 0.0, 0.0])


def test_radial_quadrature_integrates_gaussians() -> None:
    assert sphere_area(3) == pytest.approx(4 * math.pi)
    value = radial_quadrature(lambda rho: np.exp(-rho * rho), 12.0, 3)
    assert value == pytest.approx(math.pi ** 1.5, rel=1e-11)


def test_refinement_reports_a_finite_estimate(monkeypatch: pytest.MonkeyPatch) -> None:
    monkeypatch.setattr(config, "ORACLE_PANEL_BUDGET", 2 * config.ORACLE_RADIAL_DEPTH)

    def step(rho):
        return (rho < 0.3).astype(float)

    with pytest.raises(QuadratureError) as info:
        radial_quadrature(step, 1.0, 1)
    assert math.isfinite(info.value.estimate) and info.value.estimate > 0
    assert info.value.panels == 2 * config.ORACLE_RADIAL_DEPTH


def test_residual_slope_in_the_plane() -> None:
    dim = Dimension.from_d(3)
    nu = KWeight((1,))
    f = compose_radial(r_squared_series(6), 2, 12)
    g = leading_amplitude(nu, dim, 12, normalized=False)
    expansion = expand_log_integral(f, g, 4)

    def f_eval(x):
        return radial_distance(np.linalg.norm(x, axis=1)) ** 2

    def g_eval(x):
        rho = np.linalg.norm(x, axis=1)
        phi = 2.0 * np.arctan(rho / 2.0)
        return rotation_character(nu, dim, phi) * jacobian(radial_distance(rho), dim) ** -0.5

    lams = (50.0, 100.0, 200.0, 400.0)
    residuals = [
        abs(quadrature_oracle(f_eval, g_eval, lam, 2, eps=1.5, tolerance=1e-14) - evaluate_expansion(expansion, lam))
        for lam in lams
    ]
    for coarse, fine in zip(residuals, residuals[1:]):
        assert math.log2(coarse / fine) >= 4 / 2 + 2 / 2 - 0.3


def test_expansion_is_polynomial_along_the_phase_homotopy() -> None:
    quadratic = _square_norm(2, 12)
    quartic = TruncatedSeries(2, 12, {(4, 0): Fraction(1), (2, 2): Fraction(2), (0, 4): Fraction(1)})
    g = TruncatedSeries(2, 12, {(0, 0): Fraction(1), (2, 0): Fraction(-1, 6), (0, 2): Fraction(-1, 6)})
    steps = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))
    entries = [expand_log_integral(quadratic + quartic.scale(s), g, 4, exact=True).entries for s in steps]

    def vanishes(value) -> bool:
        return sympy.simplify(value) == 0

    for part in ("a", "b"):
        level = [[getattr(e[k], part) for k in range(5)] for e in entries]
        at_zero, at_half, at_one, at_two = level
        assert vanishes(at_half[0] - at_zero[0]) and vanishes(at_one[0] - at_zero[0])
        assert vanishes(at_half[2] - (at_zero[2] + at_one[2]) / 2)
        assert vanishes(at_two[4] - (3 * at_zero[4] - 8 * at_half[4] + 6 * at_one[4]))
        for k in (1, 3):
            assert all(vanishes(row[k]) for row in level)
