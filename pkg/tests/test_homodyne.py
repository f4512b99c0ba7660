import math

import numpy as np
import pytest

from photonic_molecules.analytic import closed_form_terms, continuum_asymptote, ee_closed_form, terms_from_ratio
from photonic_molecules.dynamics import RunConfig, evolve_relative, time_series_at_origin
from photonic_molecules.errors import FitRejectedError, InvalidParameterError, NoBoundStateError
from photonic_molecules.fields import Grid1D, TimeSeries
from photonic_molecules.homodyne import (
    bound_phase,
    continuum_phase,
    continuum_phase_from_ratio,
    interference_period,
    quadrature_filter,
    separate_components,
    unwrapped_phase,
)
from photonic_molecules.params import derive_scales
from photonic_molecules.spectral import compute_spectrum

FLAT_PHASE_RATIO = math.tan(3.0 * math.pi / 16.0)


def _wrapped_gap(a, b):
    return abs((a - b + math.pi) % (2.0 * math.pi) - math.pi)


def test_continuum_phase_values(scales_of):
    assert continuum_phase_from_ratio(0.0) == pytest.approx(-0.75 * math.pi)
    assert continuum_phase_from_ratio(FLAT_PHASE_RATIO) == pytest.approx(-0.5 * math.pi, abs=1e-12)
    assert continuum_phase(scales_of(Delta_over_gamma=-12.0)) == pytest.approx(continuum_phase_from_ratio(1.0 / 12.0))


def test_continuum_phase_needs_negative_detuning(reduced):
    with pytest.raises(InvalidParameterError):
        continuum_phase(reduced(Delta_over_gamma=12.0))


@pytest.mark.parametrize("ratio", [0.0, 1.0 / 12.0, 0.5])
def test_continuum_phase_matches_the_asymptote(ratio):
    terms = terms_from_ratio(0.2, ratio)
    assert _wrapped_gap(np.angle(continuum_asymptote(100.0, terms)), continuum_phase_from_ratio(ratio)) < 1e-12


def test_bound_phase():
    terms = terms_from_ratio(0.2, 1.0 / 12.0)
    t = np.linspace(0.0, 50.0, 6)
    assert np.allclose(bound_phase(t, terms), -(terms.beta * terms.eta**2).real * t / 2.0)
    flat = terms_from_ratio(0.2, FLAT_PHASE_RATIO)
    assert np.allclose(bound_phase(t, flat), 0.0, atol=1e-12)
    with pytest.raises(NoBoundStateError):
        bound_phase(t, terms_from_ratio(0.2, 2.0))


def test_unwrapped_phase():
    t = np.linspace(0.0, 100.0, 1001)
    phase = unwrapped_phase(TimeSeries(t, np.exp(-0.3j * t))).values
    assert np.allclose(phase, -0.3 * t)


def test_quadrature_filter_removes_the_continuum():
    t = np.linspace(1.0, 100.0, 200)
    phi = continuum_phase_from_ratio(1.0 / 12.0)
    continuum = TimeSeries(t, 0.4 / np.sqrt(t) * np.exp(1j * phi))
    assert np.max(np.abs(quadrature_filter(continuum, phi).values)) < 1e-12
    assert np.allclose(quadrature_filter(continuum, phi + 0.5 * math.pi).values, -0.4 / np.sqrt(t))


def test_separate_components_on_the_closed_form():
    terms = terms_from_ratio(0.2, 1.0 / 12.0)
    t = np.linspace(300.0, 1500.0, 600)
    series = TimeSeries(t, ee_closed_form(0.0, t, terms).total)
    fit = separate_components(series, terms)
    assert fit.E0_fit.real == pytest.approx(terms.E0.real, rel=0.05)
    assert _wrapped_gap(fit.phi_c, continuum_phase_from_ratio(1.0 / 12.0)) < 0.05
    assert fit.t_window == (300.0, 1500.0)


def test_pure_bound_signal():
    terms = terms_from_ratio(0.2, 1.0 / 12.0)
    t = np.linspace(2.0, 100.0, 300)
    series = TimeSeries(t, 2.0 * np.exp(-1j * terms.propagation_energy * t))
    fit = separate_components(series, terms)
    assert abs(fit.A_c) / abs(fit.A_b) < 1e-3
    assert fit.E0_fit == pytest.approx(terms.E0, rel=1e-6)
    assert interference_period(fit) == pytest.approx(2.0 * math.pi / abs(terms.E0.real), rel=1e-6)
    assert fit.as_record()["observable"].startswith("quadrature")


def test_noise_is_rejected():
    rng = np.random.default_rng(7)
    t = np.linspace(2.0, 100.0, 200)
    noise = rng.normal(size=t.size) + 1j * rng.normal(size=t.size)
    with pytest.raises(FitRejectedError):
        separate_components(TimeSeries(t, noise), terms_from_ratio(0.2, 1.0 / 12.0))


def test_fit_needs_samples_after_t_min():
    t = np.linspace(0.1, 1.0, 10)
    with pytest.raises(InvalidParameterError):
        separate_components(TimeSeries(t, np.ones(10, dtype=complex)), terms_from_ratio(0.2, 1.0 / 12.0))


@pytest.mark.slow
def test_separate_components_on_the_relative_dynamics(reduced):
    p = reduced(xi=0.2, Delta_over_gamma=-12.0, g_over_Omega=100.0)
    cfg = RunConfig(grid=Grid1D.symmetric(400.0, 2048), dt=0.02, t_max=300.0, initial_profile="dark")
    series = time_series_at_origin(evolve_relative(cfg, p))
    fit = separate_components(series, closed_form_terms(derive_scales(p)), t_min=20.0)
    ground = compute_spectrum(p).ground_state().energy
    assert fit.E0_fit.real == pytest.approx(ground.real, rel=0.15)
    assert fit.residual < 0.1
