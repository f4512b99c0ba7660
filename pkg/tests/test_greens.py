import math

import numpy as np
import pytest
from scipy import integrate

from photonic_molecules.dynamics import RunConfig, evolve_schrodinger, initial_scalar_profile
from photonic_molecules.errors import InvalidFrequencyError, InvalidParameterError, ResonanceError
from photonic_molecules.fields import Grid1D
from photonic_molecules.greens import (
    cell_averaged_potential,
    effective_potential_freq,
    free_green,
    free_green_momentum,
    freq_quantities,
    green_norm_scan,
    locate_poles,
    solve_green_nystrom,
    synthesis_cutoff,
    synthesize_ee,
)
from photonic_molecules.params import derive_scales, effective_potential, integrated_potential
from photonic_molecules.spectral import compute_spectrum

GREEN_GRID = Grid1D.symmetric(40.0, 512)


def test_free_green_branch(scales_of):
    scales = scales_of(xi=1.0)
    r = np.linspace(0.0, 10.0, 11)
    values = np.asarray(free_green(r, 0.0, 0.5, 0.0, scales))
    assert np.all(np.diff(np.abs(values)) < 0)
    assert free_green(2.0, -1.0, 0.5, 0.0, scales) == pytest.approx(free_green(-1.0, 2.0, 0.5, 0.0, scales))
    with pytest.raises(InvalidFrequencyError):
        free_green(0.0, 1.0, 0.0, 0.0, scales)


@pytest.mark.parametrize("x", [0.5, 2.0])
def test_momentum_form_transforms_to_coordinate_form(scales_of, x):
    scales = scales_of(xi=1.0)
    omega = 0.5

    def part(component):
        value, _ = integrate.quad(
            lambda p: component(free_green_momentum(p, omega, 0.0, scales)), 0.0, np.inf, weight="cos", wvar=x, epsabs=1e-14, limlst=200
        )
        return value

    transform = (part(np.real) + 1j * part(np.imag)) / math.pi
    expected = 2.0 * scales.reduced_mass * free_green(x, 0.0, omega, 0.0, scales)
    assert abs(transform - expected) / abs(expected) < 1e-8


def test_frequency_quantities_at_zero_frequency(physical):
    p = physical(Delta=-8.0, g=3.0)
    scales = derive_scales(p)
    q = freq_quantities(0.0, 0.0, p)
    assert abs(q.m0 - scales.m) / abs(scales.m) < 1e-12
    assert abs(q.alpha00 - scales.alpha) / abs(scales.alpha) < 1e-12
    assert abs(q.Lambda0) < 1e-12
    assert q.gamma_factor == pytest.approx(1.0 / 9.0, rel=1e-12)


def test_frequency_dependent_potential_at_zero_frequency(physical):
    p = physical(Delta=-8.0, g=3.0)
    r = np.linspace(0.0, 3.0, 7)
    assert np.allclose(effective_potential_freq(r, 0.0, p), effective_potential(r, p), rtol=1e-12)


def test_resonance_is_reported(physical):
    p = physical(Delta=-8.0, g=3.0)
    pole = -2j * p.Omega**2 / complex(p.gamma, p.Delta)
    with pytest.raises(ResonanceError):
        freq_quantities(pole, 0.0, p)


def test_cell_average_integrates_the_potential(scales_of):
    scales = scales_of(xi=1.0)
    grid = Grid1D.symmetric(40.0, 400)
    total = np.sum(cell_averaged_potential(grid, scales)) * grid.spacing
    assert abs(total - scales.sin4theta * integrated_potential(scales)) < 1e-6


def test_nystrom_without_interaction_is_free(reduced):
    p = reduced(xi=1.0)
    scales = derive_scales(p)
    result = solve_green_nystrom(GREEN_GRID, 0.5, 0.0, p, interacting=False)
    r = GREEN_GRID.points()
    expected = 2.0 * scales.reduced_mass * free_green(r[:, None], r[None, :], 0.5, 0.0, scales)
    assert np.allclose(result.values, expected)


def test_nystrom_solution(reduced):
    result = solve_green_nystrom(GREEN_GRID, 0.03, 0.0, reduced(xi=0.2))
    assert result.residual < 1e-8
    assert np.allclose(result.values, result.values.T, rtol=1e-8, atol=1e-10 * np.abs(result.values).max())


def test_locate_poles():
    omegas = np.linspace(-1.0, 1.0, 201)
    norms = 1.0 / np.abs(omegas - 0.3 + 0.02j) + 1.0 / np.abs(omegas + 0.55 + 0.02j)
    assert np.allclose(np.sort(locate_poles(omegas, norms)), [-0.55, 0.3])


def test_synthesis_input_validation(reduced):
    p = reduced(xi=1.0)
    grid = Grid1D.symmetric(20.0, 64)
    with pytest.raises(InvalidParameterError):
        synthesize_ee(np.ones(64), [1.0], grid, p, prefactor="unit")
    with pytest.raises(InvalidParameterError):
        synthesize_ee(np.ones(64), [0.0, 1.0], grid, p)
    with pytest.raises(InvalidParameterError):
        synthesize_ee(np.ones(32), [1.0], grid, p)


def test_synthesis_cutoff(scales_of):
    scales = scales_of(xi=1.0, Delta_over_gamma=-12.0)
    assert synthesis_cutoff(scales) == pytest.approx(6.0 / math.sqrt(145.0))


@pytest.mark.slow
def test_scan_finds_the_bound_state(reduced):
    p = reduced(xi=0.2)
    omegas = np.linspace(0.03, 0.055, 26)
    poles = locate_poles(omegas, green_norm_scan(omegas, GREEN_GRID, p))
    ground = compute_spectrum(p, Grid1D.symmetric(400.0, 1024)).ground_state()
    assert poles.size == 1
    assert poles[0] == pytest.approx(ground.eigenvalue.real, rel=0.1)


@pytest.mark.slow
def test_free_synthesis_keeps_a_flat_profile(reduced):
    p = reduced(xi=1.0)
    grid = Grid1D.symmetric(80.0, 256)
    values = synthesize_ee(np.ones(grid.n_points), [5.0], grid, p, interacting=False)
    center = np.abs(grid.points()) <= 10.0
    assert values.shape == (1, grid.n_points)
    assert np.allclose(values[0, center], 1.0, atol=0.05)


@pytest.mark.slow
@pytest.mark.parametrize("interacting", [False, True])
def test_synthesis_agrees_with_direct_integration(reduced, interacting):
    p = reduced(xi=0.2)
    grid = Grid1D.symmetric(300.0, 1024)
    cfg = RunConfig(grid=grid, dt=0.05, t_max=20.0, initial_profile="gaussian", width=40.0, interacting=interacting)
    direct = evolve_schrodinger(cfg, derive_scales(p)).final.EE
    synthesized = synthesize_ee(initial_scalar_profile(cfg, grid), [20.0], grid, p, interacting=interacting)[0]
    assert np.linalg.norm(synthesized - direct) <= 0.05 * np.linalg.norm(direct)
