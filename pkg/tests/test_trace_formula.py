from __future__ import annotations

import cmath
import logging
import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from scipy import integrate

from selberg.data.models import LengthSpectrumEntry, ManifoldData
from selberg.utils.geometry import jacobian, radial_distance, rotation_angle
from selberg.utils.helpers import PreconditionError, UnsupportedCharacterError
from selberg.utils.plancherel import identity_expansion
from selberg.utils.rep_theory import Dimension, KWeight, MWeight, rotation_character
from selberg.utils.trace_formula import (
    HeatAmplitude,
    amplitude_normalization,
    bochner_shift,
    character_heat,
    default_amplitude,
    exact_h3_amplitude,
    geometric_expansion,
    geometric_side,
    geometric_terms,
    h3_scalar_kernel,
    hyperbolic_term,
    leading_amplitude,
    leading_radial,
    parabolic_T_expansion,
    parabolic_T_term,
    parabolic_Tprime_expansion,
    tprime_numeric,
)

D3 = Dimension.from_d(3)
D5 = Dimension.from_d(5)
TRIVIAL = KWeight((0,))


def _toy_manifold(kappa: int = 0, angle: float = 0.0) -> ManifoldData:
    spectrum = (LengthSpectrumEntry(1.0, 1.0, (angle,)), LengthSpectrumEntry(2.0, 1.0, (2 * angle,)))
    if kappa:
        return ManifoldData(D3, 1.5, kappa, 0.5, 0.25, spectrum)
    return ManifoldData(D3, 1.5, spectrum=spectrum)


def test_character_heat() -> None:
    assert character_heat(MWeight((0,)), 0.0, 1.0, D3) == pytest.approx(math.exp(-1))
    assert character_heat(MWeight((0,)), 1.0, 1.0, D3) == pytest.approx(math.exp(-2))
    assert character_heat(MWeight((1,)), 2.0, 0.5, D3) == pytest.approx(math.exp(-2))
    with pytest.raises(PreconditionError):
        character_heat(MWeight((0,)), 0.0, 0.0, D3)


def test_hyperbolic_term_single_geodesic() -> None:
    t, theta = 0.5, 0.3
    manifold = ManifoldData(D3, 1.0, spectrum=(LengthSpectrumEntry(1.0, 1.0, (theta,)),))
    det = abs(1 - math.exp(-1) * cmath.exp(1j * theta)) ** 2
    weight = math.exp(-1) / det
    expected = weight / (2 * math.pi) * math.sqrt(math.pi / t) * math.exp(-t) * math.exp(-1 / (4 * t))
    assert hyperbolic_term(t, manifold, [MWeight((0,))]) == pytest.approx(expected, rel=1e-13)


def test_hyperbolic_term_is_real_for_conjugate_pairs() -> None:
    manifold = _toy_manifold(angle=0.7)
    sigmas = [MWeight((-1,)), MWeight((0,)), MWeight((1,))]
    value = hyperbolic_term(0.3, manifold, sigmas)
    assert isinstance(value, float)
    pair = hyperbolic_term(0.3, manifold, [MWeight((1,))]) + hyperbolic_term(0.3, manifold, [MWeight((-1,))])
    assert value == pytest.approx(pair + hyperbolic_term(0.3, manifold, [MWeight((0,))]))


def test_hyperbolic_term_decays() -> None:
    manifold = ManifoldData(D3, 1.0, spectrum=(LengthSpectrumEntry(1.0, 1.0, (0.0,)),))
    scaled = [
        hyperbolic_term(2.0 ** -k, manifold, [MWeight((0,))]) * math.exp(2.0 ** k / 8)
        for k in range(2, 11)
    ]
    assert max(abs(v) for v in scaled) < 10.0


def test_hyperbolic_term_needs_characters_in_higher_dimension() -> None:
    entry = LengthSpectrumEntry(1.0, 1.0, (0.1, 0.2))
    manifold = ManifoldData(D5, 1.0, spectrum=(entry,))
    with pytest.raises(UnsupportedCharacterError):
        hyperbolic_term(0.5, manifold, [MWeight((1, 0))])
    known = LengthSpectrumEntry(1.0, 1.0, (0.1, 0.2), {"1,0": 2.0 + 0j})
    manifold = ManifoldData(D5, 1.0, spectrum=(known,))
    assert hyperbolic_term(0.5, manifold, [MWeight((1, 0))]) > 0


def test_parabolic_T_d3() -> None:
    sigmas = [(MWeight((0,)), 1)]
    for t in (0.01, 0.5, 2.0):
        assert parabolic_T_term(t, sigmas, D3) == pytest.approx(math.exp(-t) / (2 * math.sqrt(math.pi * t)))
    expansion = parabolic_T_expansion(sigmas, D3, order=6)
    assert float(expansion.coefficient(Fraction(-1, 2))) == pytest.approx(1 / (2 * math.sqrt(math.pi)))
    assert float(expansion.coefficient(Fraction(1, 2))) == pytest.approx(-1 / (2 * math.sqrt(math.pi)))
    assert expansion.evaluate(0.01) == pytest.approx(parabolic_T_term(0.01, sigmas, D3), rel=1e-14)


def test_parabolic_T_residual_shrinks_with_the_next_power() -> None:
    sigmas = [(MWeight((0,)), 1)]
    expansion = parabolic_T_expansion(sigmas, D3, order=6)
    residuals = [abs(parabolic_T_term(t, sigmas, D3) - expansion.evaluate(t)) for t in (0.8, 0.4, 0.2)]
    for coarse, fine in zip(residuals, residuals[1:]):
        assert coarse / fine == pytest.approx(2 ** 6.5, rel=0.1)


def test_h3_kernel() -> None:
    for r in (0.0, 1e-9, 0.3, 1.5):
        for t in (1e-3, 0.1):
            scaled = (4 * math.pi * t) ** 1.5 * math.exp(r * r / (4 * t)) * h3_scalar_kernel(r, t)
            ratio = r / math.sinh(r) if r else 1.0
            assert scaled == pytest.approx(ratio * math.exp(-t), rel=1e-12)
    t = 0.1
    mass, _ = integrate.quad(lambda r: h3_scalar_kernel(r, t) * 4 * math.pi * math.sinh(r) ** 2, 0.0, 20.0, limit=200)
    assert mass == pytest.approx(1.0, abs=1e-8)


def test_leading_amplitude_matches_exact_kernel() -> None:
    exact = exact_h3_amplitude(8, 0)
    assert leading_amplitude(TRIVIAL, D3, 8, normalized=False) == exact.series(0, 8)


@pytest.mark.parametrize("nu, dim", [(KWeight((1,)), D3), (KWeight((2,)), D3), (KWeight((1, 0)), D5)])
def test_leading_radial_matches_character(nu: KWeight, dim: Dimension) -> None:
    rho = 0.1
    coeffs = leading_radial(nu, dim, 10).univariate_coefficients()
    value = sum(float(c) * (rho * rho) ** k for k, c in enumerate(coeffs))
    r = float(radial_distance(np.array([rho]))[0])
    phi = rotation_angle([rho])
    expected = float(rotation_character(nu, dim, phi)) * jacobian(r, dim) ** -0.5
    assert value == pytest.approx(expected, rel=1e-12)


def test_amplitude_normalization() -> None:
    amplitude = HeatAmplitude(TRIVIAL, D3, exact_h3_amplitude(4, 0).radial)
    assert amplitude.normalization == pytest.approx((4 * math.pi) ** -1.5)
    assert float(amplitude_normalization(D5, exact=True)) == pytest.approx((4 * math.pi) ** -2.5)
    assert amplitude.evaluate(0, 0.0) == pytest.approx((4 * math.pi) ** -1.5)


def test_default_amplitude() -> None:
    assert default_amplitude(TRIVIAL, D3, 4).exact_kernel
    assert default_amplitude(TRIVIAL, D3, 4).i_max == 2
    other = default_amplitude(KWeight((1,)), D3, 4)
    assert not other.exact_kernel and other.i_max == 0


def test_log_t_coefficient_vanishes_exactly() -> None:
    expansion = parabolic_Tprime_expansion(exact_h3_amplitude(12, 2), 4, exact=True)
    assert expansion.coefficient(0, True) == 0
    assert expansion.coefficient(Fraction(-1, 2), True) != 0


@pytest.mark.parametrize("nu", [KWeight((0,)), KWeight((1,)), KWeight((2,))])
def test_log_t_coefficient_vanishes(nu: KWeight) -> None:
    amplitude = default_amplitude(nu, D3, 1)
    assert parabolic_Tprime_expansion(amplitude, 1).coefficient(0, True) == 0


@pytest.mark.parametrize("nu", [KWeight((1,)), KWeight((2,))])
def test_log_t_coefficient_vanishes_in_exact_arithmetic(nu: KWeight) -> None:
    expansion = parabolic_Tprime_expansion(default_amplitude(nu, D3, 1), 1, exact=True)
    assert sympy.simplify(expansion.coefficient(0, True)) == 0
    assert sympy.simplify(expansion.coefficient(Fraction(-1, 2), True)) != 0


def test_tprime_order_needs_amplitudes() -> None:
    with pytest.raises(PreconditionError):
        parabolic_Tprime_expansion(default_amplitude(KWeight((1,)), D3, 4), 4)


def test_tprime_expansion_matches_numeric() -> None:
    amplitude = exact_h3_amplitude(12, 2)
    expansion = parabolic_Tprime_expansion(amplitude, 4)
    t = 1e-3
    assert expansion.evaluate(t) == pytest.approx(tprime_numeric(t, amplitude), rel=1e-5)


def test_tprime_expansion_tracks_numeric_as_t_shrinks() -> None:
    amplitude = exact_h3_amplitude(12, 2)
    expansion = parabolic_Tprime_expansion(amplitude, 4)
    errors = []
    for t in (0.02, 0.01, 0.005):
        value = tprime_numeric(t, amplitude)
        errors.append(abs(expansion.evaluate(t) - value) / abs(value))
    assert errors[0] < 1e-5
    for coarse, fine in zip(errors, errors[1:]):
        assert coarse / fine > 4.0


def test_compact_case_reduces_to_identity_and_hyperbolic() -> None:
    manifold = _toy_manifold()
    terms = geometric_terms(0.2, manifold, KWeight((1,)))
    assert terms.parabolic == 0.0 and terms.weighted == 0.0
    assert terms.total == pytest.approx(terms.identity + terms.hyperbolic)
    expansion = geometric_expansion(manifold, KWeight((1,)), identity_order=4)
    sigmas = [(MWeight((k,)), 1) for k in (-1, 0, 1)]
    assert expansion == identity_expansion(1.5, sigmas, D3, manifold.c_n, 4)


def test_cusped_terms_add_up() -> None:
    manifold = _toy_manifold(kappa=1, angle=0.4)
    terms = geometric_terms(0.1, manifold, TRIVIAL)
    assert terms.parabolic == pytest.approx(math.exp(-0.1) / (2 * math.sqrt(math.pi * 0.1)))
    assert terms.total == pytest.approx(
        terms.identity + terms.hyperbolic + 0.5 * terms.parabolic + 0.25 * terms.weighted
    )


def test_cusped_expansion() -> None:
    manifold = _toy_manifold(kappa=1)
    expansion = geometric_expansion(manifold, TRIVIAL, identity_order=4, t_order=4, tprime_order=4)
    assert expansion.coefficient(0, True) == 0
    assert expansion.min_beta == Fraction(-3, 2)
    assert any(term.has_log for term in expansion.terms)


def test_geometric_side_fits_expansion_at_small_t() -> None:
    manifold = _toy_manifold(kappa=1, angle=0.4)
    expansion = geometric_expansion(manifold, TRIVIAL, identity_order=6, t_order=6, tprime_order=4)
    errors = {}
    for t in (0.005, 0.05):
        side = geometric_side(t, manifold, TRIVIAL)
        errors[t] = abs(side - expansion.evaluate(t)) / abs(side)
    assert errors[0.005] < 1e-4
    assert errors[0.005] < errors[0.05]


def test_cusped_expansion_clamps_tprime_order(caplog: pytest.LogCaptureFixture) -> None:
    manifold = _toy_manifold(kappa=1)
    with caplog.at_level(logging.WARNING):
        expansion = geometric_expansion(manifold, KWeight((1,)), tprime_order=4)
    assert "T' expanded through j=1" in caplog.text
    assert max(term.beta for term in expansion.terms if term.has_log) == Fraction(-1, 2)


def test_bochner_shift() -> None:
    assert bochner_shift(2.0, KWeight((1,)), D3, 0.5) == pytest.approx(2.0 * math.exp(-1.0))
    assert bochner_shift(2.0, TRIVIAL, D3, 0.5) == 2.0
