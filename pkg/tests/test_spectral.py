import math

import numpy as np
import pytest

from photonic_molecules.analytic import closed_form_terms
from photonic_molecules.errors import EigensolverError, NoBoundStateError
from photonic_molecules.fields import Frame, Grid1D
from photonic_molecules.params import MediumParams, derive_scales
from photonic_molecules.spectral import (
    CoarseGridWarning,
    antisymmetric_estimate,
    build_hamiltonian,
    classify_states,
    compute_spectrum,
    eigen_spectrum,
    fit_bound_size,
    ground_energy_law,
    laplacian,
    molecule_profile,
    size_estimates,
    spectrum_vs_xi,
)

GRID = Grid1D.symmetric(400.0, 1024)


@pytest.fixture(scope="module")
def ground_spectrum():
    return compute_spectrum(MediumParams.from_reduced(0.2, -12.0, 100.0), GRID)


def test_laplacians_agree_on_smooth_functions():
    grid = Grid1D.symmetric(40.0, 512)
    f = np.exp(-grid.points() ** 2 / 4.0)
    exact = (grid.points() ** 2 / 4.0 - 0.5) * f
    assert np.allclose(laplacian(grid, "fourier") @ f, exact, atol=1e-10)
    assert np.allclose(laplacian(grid, "difference") @ f, exact, atol=1e-3)
    with pytest.raises(ValueError):
        laplacian(Grid1D.symmetric(40.0, 512, "dirichlet"), "fourier")


def test_hamiltonian_is_complex_symmetric(scales_of):
    grid = Grid1D.symmetric(40.0, 512)
    H = build_hamiltonian(grid, scales_of(xi=1.0))
    assert np.allclose(H, H.T)
    assert np.any(H.imag != 0)


@pytest.mark.filterwarnings("ignore::photonic_molecules.spectral.CoarseGridWarning")
def test_free_particle_spectrum(scales_of):
    grid = Grid1D.symmetric(20.0, 64)
    scales = scales_of(xi=1.0)
    spectrum = eigen_spectrum(build_hamiltonian(grid, scales, "fourier", interacting=False))
    scaled = np.sort((2.0 * scales.reduced_mass * spectrum.values).real)
    expected = np.sort(grid.momenta() ** 2)
    assert np.allclose(scaled, expected, rtol=0, atol=1e-10 * expected.max())
    assert np.allclose((2.0 * scales.reduced_mass * spectrum.values).imag, 0.0, atol=1e-10 * expected.max())


def test_eigensolver_rejects_non_finite_input():
    H = np.eye(8, dtype=complex)
    H[2, 3] = np.nan
    with pytest.raises(EigensolverError):
        eigen_spectrum(H)


def test_coarse_grid_warning(scales_of):
    with pytest.warns(CoarseGridWarning):
        build_hamiltonian(Grid1D.symmetric(40.0, 256), scales_of(xi=2.0))


def test_ground_state(ground_spectrum):
    assert ground_spectrum.n_bound == 1
    ground = ground_spectrum.ground_state()
    assert ground.is_bound
    assert ground.localization >= 0.99
    assert ground.energy.real == pytest.approx(ground_energy_law(0.2), rel=0.10)
    assert ground.energy.imag < 0
    profile = ground.profile
    assert np.sum(np.abs(profile) ** 2) * GRID.spacing == pytest.approx(1.0)
    assert abs(profile[GRID.origin_index].imag) < 1e-12


def test_literal_window_is_reported(ground_spectrum):
    assert ground_spectrum.literal_window == pytest.approx(0.25, rel=0.01)
    assert ground_spectrum.energy_window == pytest.approx(1.0 / abs(1.0 + 1j / 12.0), rel=1e-3)
    assert ground_spectrum.n_bound_in_window == 1


def test_states_sorted_by_energy(ground_spectrum):
    real_parts = [state.energy.real for state in ground_spectrum.states]
    assert real_parts == sorted(real_parts)
    assert len(ground_spectrum.states) == GRID.n_points


def test_bound_profile_size(ground_spectrum, scales_of):
    scales = scales_of(xi=0.2)
    expected = closed_form_terms(scales).r_b
    assert fit_bound_size(ground_spectrum.ground_state(), GRID) == pytest.approx(expected, rel=0.15)
    estimates = size_estimates(scales)
    assert estimates["r_b_alt"] == pytest.approx(math.pi / 0.12)
    assert estimates["r_b"] == pytest.approx(expected)


def test_fourier_and_difference_agree(scales_of):
    scales = scales_of(xi=0.2)
    energies = []
    for method in ("difference", "fourier"):
        spectrum = classify_states(eigen_spectrum(build_hamiltonian(GRID, scales, method)), GRID, scales)
        energies.append(spectrum.ground_state().energy)
    assert abs(energies[0] - energies[1]) / abs(energies[0]) < 0.01


def test_no_bound_state_without_window(ground_spectrum, scales_of):
    scales = scales_of(xi=0.2)
    H = build_hamiltonian(Grid1D.symmetric(400.0, 256), scales)
    result = classify_states(eigen_spectrum(H), Grid1D.symmetric(400.0, 256), scales, window=0.0)
    assert result.n_bound == 0
    with pytest.raises(NoBoundStateError):
        result.ground_state()


def test_molecule_profile(ground_spectrum, scales_of):
    scales = scales_of(xi=0.2)
    ground = ground_spectrum.ground_state()
    molecule = molecule_profile(ground, scales, GRID)
    assert molecule.frame is Frame.RELATIVE_K0
    assert np.allclose(molecule.ES, -molecule.EE / scales.cos_theta)
    assert np.allclose(molecule.SE, molecule.ES)
    r = GRID.points()
    far = np.abs(r) > 3.0
    expected_ss = r[far] ** 6 / (r[far] ** 6 + 1.0) * molecule.EE[far] / scales.cos2theta
    assert np.allclose(molecule.SS[far], expected_ss)
    assert abs(molecule.SS[GRID.origin_index]) == 0
    assert molecule.exchange_asymmetry() < 1e-10
    estimate = antisymmetric_estimate(ground, scales, GRID)
    assert estimate.shape == r.shape


def test_molecule_profile_needs_bound_state(ground_spectrum, scales_of):
    unbound = next(state for state in ground_spectrum.states if not state.is_bound)
    with pytest.raises(NoBoundStateError):
        molecule_profile(unbound, scales_of(xi=0.2), GRID)


def test_xi_scan_is_independent_of_workers(reduced):
    grid = Grid1D.symmetric(400.0, 512)
    p = reduced(xi=0.2)
    serial = spectrum_vs_xi([0.2, 0.3], p, grid)
    parallel = spectrum_vs_xi([0.2, 0.3], p, grid, workers=2)
    assert [row["n_bound"] for row in serial.rows] == [row["n_bound"] for row in parallel.rows]
    assert serial.rows[1]["Re_E0"] == pytest.approx(parallel.rows[1]["Re_E0"], rel=1e-10)
    assert serial.rows[1]["Re_E0"] < serial.rows[0]["Re_E0"] < 0
    assert serial.rows[0]["law_E0"] == pytest.approx(ground_energy_law(0.2))


@pytest.mark.slow
@pytest.mark.parametrize("xi", [0.1, 0.2])
def test_ground_energy_law(reduced, xi):
    spectrum = compute_spectrum(reduced(xi=xi))
    assert spectrum.ground_state().energy.real == pytest.approx(ground_energy_law(xi), rel=0.10)


@pytest.mark.slow
def test_ground_energy_law_deviation_grows_linearly(reduced):
    xis = np.array([0.1, 0.2, 0.3, 0.4])
    scan = spectrum_vs_xi(xis, reduced(xi=0.2))
    energies = np.array([row["Re_E0"] for row in scan.rows])
    deviation = np.abs(energies / ground_energy_law(xis) - 1.0)
    assert np.all(np.diff(deviation) > 0)
    # first order in xi: the potential range R_B against a bound state of size ~ 1/xi^2
    assert np.all((deviation / xis > 0.3) & (deviation / xis < 0.7))


@pytest.mark.slow
def test_ground_energy_deviation_is_not_discretization(reduced):
    coarse = compute_spectrum(reduced(xi=0.4), Grid1D.symmetric(200.0, 2048)).ground_state().energy.real
    fine = compute_spectrum(reduced(xi=0.4), Grid1D.symmetric(200.0, 4096)).ground_state().energy.real
    assert fine == pytest.approx(coarse, rel=0.02)
    assert abs(fine / ground_energy_law(0.4) - 1.0) > 0.1


@pytest.mark.slow
def test_several_bound_states_at_large_xi(reduced):
    spectrum = compute_spectrum(reduced(xi=2.0), Grid1D.symmetric(40.0, 1024))
    assert spectrum.n_bound >= 2
    assert derive_scales(reduced(xi=2.0)).xi == 2.0


@pytest.mark.slow
@pytest.mark.parametrize("xi", [0.2, 0.5, 1.0, 1.2])
def test_single_bound_state_below_threshold(reduced, xi):
    assert compute_spectrum(reduced(xi=xi)).n_bound == 1
