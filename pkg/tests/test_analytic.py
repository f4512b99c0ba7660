import math

import mpmath
import numpy as np
import pytest

from photonic_molecules.analytic import (
    GAMMA_B_COEFFICIENT,
    amplitude_decay_rate,
    bound_energy_series,
    bound_size,
    cerf,
    closed_form_terms,
    continuum_asymptote,
    crossover_time,
    ee_closed_form,
    optimal_crossover_estimate,
    pseudo_strength,
    terms_from_ratio,
)
from photonic_molecules.errors import InvalidParameterError, NoBoundStateError
from photonic_molecules.params import integrated_potential

OPTIMAL_RATIO = math.tan(3.0 * math.pi / 16.0)


def test_cerf_values():
    assert cerf(0.0) == 0
    assert cerf(1.0) == pytest.approx(0.842700792949715, rel=1e-13)
    assert np.isscalar(cerf(0.5j))


def test_cerf_symmetries():
    rng = np.random.default_rng(7)
    z = rng.uniform(-5.0, 5.0, 100) + 1j * rng.uniform(-5.0, 5.0, 100)
    assert np.allclose(cerf(-z), -cerf(z), rtol=1e-13, atol=1e-13)
    assert np.allclose(cerf(np.conj(z)), np.conj(cerf(z)), rtol=1e-13, atol=1e-13)


@pytest.mark.parametrize("modulus", [0.1, 0.7, 2.0, 4.0, 9.0, 30.0])
@pytest.mark.parametrize("angle", [0.0, math.pi / 4 - 0.05, -math.pi / 4 + 0.02, 3 * math.pi / 4 + 0.03])
def test_cerf_against_arbitrary_precision(modulus, angle):
    z = modulus * complex(math.cos(angle), math.sin(angle))
    mpmath.mp.dps = 40
    expected = complex(mpmath.erf(mpmath.mpc(z.real, z.imag)))
    assert abs(cerf(z) - expected) <= 1e-12 * max(1.0, abs(expected))


def test_cerf_range():
    with pytest.raises(InvalidParameterError):
        cerf(2e6)


def test_pseudo_strength(scales_of):
    assert terms_from_ratio(0.2, 0.0).eta == pytest.approx(2.0 * math.pi / 3.0)
    scales = scales_of(Delta_over_gamma=-12.0)
    strength = pseudo_strength(scales)
    quadrature = integrated_potential(scales)
    assert abs(strength - quadrature) / abs(strength) <= 1e-8
    assert np.angle(strength) == pytest.approx(-5.0 / 6.0 * math.atan(1.0 / 12.0))
    physical_units = pseudo_strength(scales, reduced=False)
    assert physical_units == pytest.approx(strength * scales.energy_unit * scales.R_B)


def test_positive_detuning_has_no_closed_form(scales_of):
    with pytest.raises(InvalidParameterError):
        closed_form_terms(scales_of(Delta_over_gamma=4.0))


def test_ee_without_interaction_is_flat():
    terms = terms_from_ratio(0.0, 0.1)
    r = np.linspace(-50.0, 50.0, 11)
    for t in (0.5, 20.0, 300.0):
        split = ee_closed_form(r, t, terms)
        assert np.allclose(split.total, 1.0)
        assert not split.has_bound
        assert np.all(split.bound == 0)


def test_bound_part_is_the_pole_term():
    terms = terms_from_ratio(0.2, 1.0 / 12.0)
    r = np.linspace(-60.0, 60.0, 121)
    t = 20.0
    split = ee_closed_form(r, t, terms)
    beta_eta = terms.beta * terms.eta
    expected = 2.0 * np.exp(-0.5j * terms.beta * terms.eta**2 * t - beta_eta * np.abs(r))
    assert np.allclose(split.bound, expected, rtol=1e-12)
    assert np.allclose(split.bound + split.continuum, split.total, rtol=1e-12, atol=1e-12)
    assert split.has_bound


def test_ee_broadcasts():
    terms = terms_from_ratio(0.2, 0.25)
    split = ee_closed_form(np.zeros((3, 1)), np.array([1.0, 2.0]), terms)
    assert split.total.shape == (3, 2)
    assert isinstance(ee_closed_form(0.0, 1.0, terms).total, complex)
    with pytest.raises(InvalidParameterError):
        ee_closed_form(0.0, 0.0, terms)


def test_flat_background_far_from_origin():
    terms = terms_from_ratio(0.2, 1.0 / 12.0)
    r = 100.0 * terms.r_b
    assert abs(ee_closed_form(r, 20.0, terms).total) == pytest.approx(1.0, abs=0.02)


def test_continuum_decays_as_inverse_square_root():
    terms = terms_from_ratio(0.2, 1.0 / 12.0)
    times = np.linspace(200.0, 400.0, 21)
    scaled = np.abs(ee_closed_form(0.0, times, terms).continuum) * np.sqrt(times)
    assert np.ptp(scaled) / scaled.mean() < 0.01
    late = np.geomspace(200.0, 2000.0, 30)
    slope, _ = np.polyfit(np.log(late), np.log(np.abs(ee_closed_form(0.0, late, terms).continuum)), 1)
    assert slope == pytest.approx(-0.5, abs=0.02)
    asymptote = continuum_asymptote(2000.0, terms)
    assert abs(ee_closed_form(0.0, 2000.0, terms).continuum - asymptote) / abs(asymptote) < 0.05


def test_bound_amplitude_decay():
    terms = terms_from_ratio(0.2, 1.0 / 12.0)
    times = np.linspace(10.0, 100.0, 46)
    bound = np.abs(ee_closed_form(0.0, times, terms).bound)
    slope, intercept = np.polyfit(times, np.log(bound), 1)
    assert -slope == pytest.approx(amplitude_decay_rate(terms), rel=1e-6)
    assert np.max(np.abs(np.log(bound) - (slope * times + intercept))) < 1e-3
    assert amplitude_decay_rate(terms) == pytest.approx(GAMMA_B_COEFFICIENT * 0.04 / 12.0, rel=0.05)


@pytest.mark.parametrize("ratio", [1.0 / 12.0, 0.25, OPTIMAL_RATIO])
def test_continuum_phase_limit(ratio):
    terms = terms_from_ratio(0.2, ratio)
    t = 5.0 * crossover_time(terms)
    phase = np.angle(ee_closed_form(0.0, t, terms).continuum)
    expected = -0.75 * math.pi + 4.0 / 3.0 * math.atan(ratio)
    assert abs(np.angle(np.exp(1j * (phase - expected)))) < 0.05


def test_bound_energy_series():
    lossless = bound_energy_series(terms_from_ratio(0.2, 0.0))
    assert lossless.E0 == pytest.approx(-0.043865, abs=1e-6)
    assert lossless.gamma_b == 0
    assert lossless.E0_exact == pytest.approx(lossless.E0, rel=1e-12)

    series = bound_energy_series(terms_from_ratio(0.2, 1.0 / 12.0))
    assert series.gamma_b == pytest.approx(0.009747, abs=2e-6)
    assert series.gamma_b_exact == pytest.approx(series.gamma_b, rel=0.03)


@pytest.mark.parametrize("ratio", [0.02, 0.05, 0.1, 0.2])
def test_series_remainder_is_third_order(ratio):
    series = bound_energy_series(terms_from_ratio(0.2, ratio))
    assert abs(series.E0 - series.E0_exact) / abs(series.E0_exact) <= 10.0 * ratio**3


def test_series_warns_outside_range():
    with pytest.warns(RuntimeWarning):
        bound_energy_series(terms_from_ratio(0.2, 0.9))


def test_bound_size():
    assert bound_size(terms_from_ratio(0.2, 0.0)) == pytest.approx(23.873, rel=1e-4)
    sizes = [bound_size(terms_from_ratio(xi, 0.1)) for xi in (0.1, 0.2, 0.4, 0.8)]
    for xi, size in zip((0.1, 0.2, 0.4, 0.8), sizes):
        assert size > 1.0 / xi
    assert sizes[0] / sizes[1] == pytest.approx(4.0)
    with pytest.raises(NoBoundStateError):
        bound_size(terms_from_ratio(0.2, 2.0))


def test_crossover_at_optimal_detuning():
    t0 = crossover_time(terms_from_ratio(0.2, OPTIMAL_RATIO))
    assert t0 == pytest.approx(optimal_crossover_estimate(0.2), rel=0.15)
    assert optimal_crossover_estimate(0.2) == pytest.approx(39.27, abs=0.01)
    halved = crossover_time(terms_from_ratio(0.1, OPTIMAL_RATIO))
    assert halved / t0 == pytest.approx(4.0, rel=0.2)


def test_crossover_needs_bound_state():
    with pytest.raises(NoBoundStateError):
        crossover_time(terms_from_ratio(0.2, 2.0))
