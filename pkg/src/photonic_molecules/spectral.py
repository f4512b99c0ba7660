"""Spectrum of the effective non-Hermitian pair Hamiltonian.

The relative motion of a slow-light photon pair obeys

    H = -(1/2m) d^2/dr^2 + sin^4(theta) W(r)

with complex mass m and saturated potential W, both in reduced units. H is
complex symmetric, not Hermitian.

Energies are reported in the binding convention: for Delta < 0 the mass has
a negative real part and bound states sit above the continuum, so the
reported energy is E = -conj(lambda) for an eigenvalue lambda of H; for
Delta > 0, E = lambda. Either way Im E < 0 for decaying states.
"""

import logging
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import linalg

from . import analytic
from .errors import EigensolverError, NoBoundStateError
from .fields import Boundary, Frame, Grid1D, PairField
from .params import DerivedScales, MediumParams, derive_scales, reduced_effective_potential

logger = logging.getLogger(__name__)

RESIDUAL_TOLERANCE = 1e-8
LOCALIZATION_THRESHOLD = 0.99
LOCALIZATION_GRID_FRACTION = 0.4
LOCALIZATION_SIZE_FACTOR = 10.0


class CoarseGridWarning(UserWarning):
    pass


def size_estimates(scales: DerivedScales) -> dict:
    """Bound-state size estimates in R_B units.

    r_b is 1/Re(beta eta) from the pseudopotential model (inf when it has no
    bound state), r_b_alt the pi/(3 xi^2) far-detuned value, r_b_lower the
    3/(4 pi xi^2) lower estimate.
    """
    xi = scales.xi
    r_b = math.inf
    if scales.params.Delta < 0:
        r_b = analytic.closed_form_terms(scales).r_b
    return {
        "r_b": r_b,
        "r_b_alt": math.pi / (3.0 * xi**2),
        "r_b_lower": 3.0 / (4.0 * math.pi * xi**2),
    }


def _size_scale(scales: DerivedScales) -> float:
    """Size used for the localization radius; never below one blockade radius."""
    estimates = size_estimates(scales)
    r_b = estimates["r_b"] if math.isfinite(estimates["r_b"]) else estimates["r_b_alt"]
    return max(r_b, 1.0)


def laplacian(grid: Grid1D, method: str = "difference") -> np.ndarray:
    """Dense second-derivative matrix on the grid.

    "difference" is the three-point stencil, wrapped for periodic grids;
    "fourier" is the spectral Laplacian of a periodic grid.
    """
    n = grid.n_points
    h = grid.spacing
    if method == "fourier":
        if grid.boundary != Boundary.PERIODIC:
            raise ValueError("The Fourier Laplacian needs a periodic grid.")
        column = np.fft.ifft(-grid.momenta() ** 2).real
        return linalg.circulant(column)
    if method != "difference":
        raise ValueError("Unknown Laplacian {!r}.".format(method))
    d2 = (np.diag(np.full(n, -2.0)) + np.diag(np.ones(n - 1), 1) + np.diag(np.ones(n - 1), -1)) / h**2
    if grid.boundary == Boundary.PERIODIC:
        d2[0, -1] = d2[-1, 0] = 1.0 / h**2
    return d2


def interaction_diagonal(grid: Grid1D, scales: DerivedScales) -> np.ndarray:
    return scales.sin4theta * reduced_effective_potential(grid.points(), scales)


def build_hamiltonian(grid: Grid1D, scales: DerivedScales, method: str = "difference", interacting: bool = True):
    """H = -(1/2m) D2 + diag(sin^4(theta) W(r)) in reduced units."""
    size = _size_scale(scales)
    if grid.spacing > size / 10.0:
        warnings.warn(
            "Grid spacing {:.3g} R_B exceeds a tenth of the bound-state size {:.3g} R_B.".format(grid.spacing, size),
            CoarseGridWarning,
            stacklevel=2,
        )
    H = (-0.5 / scales.reduced_mass) * laplacian(grid, method).astype(complex)
    if interacting:
        H[np.diag_indices(grid.n_points)] += interaction_diagonal(grid, scales)
    return H


class EigenPairs(NamedTuple):
    """Eigenvalues and the matching eigenvectors (as columns)."""

    values: np.ndarray
    vectors: np.ndarray

    def pairs(self):
        return [(self.values[i], self.vectors[:, i]) for i in range(self.values.size)]


def eigen_spectrum(H) -> EigenPairs:
    """Full complex eigendecomposition with a per-pair residual check.

    Raises:
        EigensolverError: If LAPACK fails or a pair has relative residual
            above 1e-8; carries the offending index.
    """
    H = np.asarray(H, dtype=complex)
    try:
        values, vectors = linalg.eig(H, check_finite=True)
    except (linalg.LinAlgError, ValueError) as error:
        raise EigensolverError(-1, message="Eigensolver failed: {}".format(error)) from error
    scale = np.linalg.norm(H, 1) or 1.0
    residuals = np.linalg.norm(H @ vectors - vectors * values, axis=0) / scale
    worst = int(np.argmax(residuals))
    if residuals[worst] > RESIDUAL_TOLERANCE:
        raise EigensolverError(worst, float(residuals[worst]))
    logger.debug("diagonalized %d x %d matrix, worst residual %.2e", H.shape[0], H.shape[0], residuals[worst])
    return EigenPairs(values, vectors)


@dataclass
class EigenState:
    energy: complex
    eigenvalue: complex
    profile: np.ndarray
    localization: float
    is_bound: bool
    pseudo_norm: complex


@dataclass
class SpectrumResult:
    """Classified spectrum.

    `energy_window` is the window used for the bound count (the potential
    depth sin^4(theta)|W(0)|); `literal_window` is Omega^2/(2|Gamma|) in energy
    units, reported per state through `in_window`.
    """

    states: list[EigenState]
    xi: float
    energy_window: float
    literal_window: float
    localization_radius: float
    grid: Grid1D

    @property
    def n_bound(self) -> int:
        return sum(state.is_bound for state in self.states)

    @property
    def n_bound_in_window(self) -> int:
        return sum(state.is_bound and abs(state.energy) < self.literal_window for state in self.states)

    def bound_states(self) -> list[EigenState]:
        return [state for state in self.states if state.is_bound]

    def ground_state(self) -> EigenState:
        bound = self.bound_states()
        if not bound:
            raise NoBoundStateError("No bound state at xi = {:g}.".format(self.xi))
        return min(bound, key=lambda state: state.energy.real)


def classification_window(scales: DerivedScales) -> float:
    return scales.sin4theta * abs(1.0 / scales.reduced_alpha)


def literal_window(scales: DerivedScales) -> float:
    p = scales.params
    return p.Omega**2 / (2.0 * abs(scales.Gamma)) / scales.energy_unit


def binding_energy(eigenvalue, scales: DerivedScales):
    return -np.conj(eigenvalue) if scales.params.Delta < 0 else eigenvalue


def _normalize(vector, grid: Grid1D):
    vector = vector / math.sqrt(np.sum(np.abs(vector) ** 2) * grid.spacing)
    at_origin = vector[grid.origin_index]
    if abs(at_origin) > 0:
        vector = vector * (abs(at_origin) / at_origin)
    return vector


def classify_states(spectrum: EigenPairs, grid: Grid1D, scales: DerivedScales, window: float | None = None):
    """Sort states by Re E and mark localized in-window states as bound.

    A state is bound iff at least 99% of its weight lies within
    r_loc = min(0.4 * grid length, 10 * size) and |E| < window.
    """
    if window is None:
        window = classification_window(scales)
    r = grid.points()
    r_loc = min(LOCALIZATION_GRID_FRACTION * grid.length, LOCALIZATION_SIZE_FACTOR * _size_scale(scales))
    inside = np.abs(r) <= r_loc

    states = []
    for value, vector in spectrum.pairs():
        profile = _normalize(vector, grid)
        weight = np.abs(profile) ** 2
        localization = float(np.sum(weight[inside]) / np.sum(weight))
        energy = complex(binding_energy(value, scales))
        states.append(
            EigenState(
                energy=energy,
                eigenvalue=complex(value),
                profile=profile,
                localization=localization,
                is_bound=localization >= LOCALIZATION_THRESHOLD and abs(energy) < window,
                pseudo_norm=complex(np.sum(profile**2) * grid.spacing),
            )
        )
    states.sort(key=lambda state: (state.energy.real, state.energy.imag))
    result = SpectrumResult(states, scales.xi, window, literal_window(scales), r_loc, grid)
    logger.info("xi = %g: %d bound states (%d inside the EIT window)", scales.xi, result.n_bound, result.n_bound_in_window)
    return result


def compute_spectrum(p: MediumParams, grid: Grid1D | None = None, method: str = "difference") -> SpectrumResult:
    scales = derive_scales(p)
    grid = grid or Grid1D.for_xi(scales.xi)
    return classify_states(eigen_spectrum(build_hamiltonian(grid, scales, method)), grid, scales)


def ground_energy_law(xi):
    return -(math.pi**2 / 9.0) * xi**2


class XiScan(NamedTuple):
    rows: list[dict]
    spectra: list[SpectrumResult]


def _xi_params(xi: float, p: MediumParams) -> MediumParams:
    return MediumParams.from_reduced(
        xi, p.Delta / p.gamma, p.g / p.Omega, p.Omega / p.gamma, lambda_p=p.lambda_p, w=p.w
    )


def spectrum_vs_xi(xi_list, p: MediumParams, grid: Grid1D | None = None, workers: int = 1) -> XiScan:
    """Spectra over a list of xi at the detuning and coupling ratios of `p`.

    Points are independent and run on a thread pool when workers > 1.
    """

    def one(xi):
        return compute_spectrum(_xi_params(xi, p), grid)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            spectra = list(executor.map(one, xi_list))
    else:
        spectra = [one(xi) for xi in xi_list]

    rows = []
    for xi, spectrum in zip(xi_list, spectra):
        row = {"xi": xi, "n_bound": spectrum.n_bound, "n_bound_in_window": spectrum.n_bound_in_window}
        try:
            ground = spectrum.ground_state().energy
        except NoBoundStateError:
            ground = complex(math.nan, math.nan)
        row.update({"Re_E0": ground.real, "Im_E0": ground.imag, "law_E0": ground_energy_law(xi)})
        rows.append(row)
    return XiScan(rows, spectra)


def molecule_profile(psi0: EigenState, scales: DerivedScales, grid: Grid1D) -> PairField:
    """Four-component molecule built from the bound relative wave function.

    (EE, ES, SE, SS) = cos^2(theta) psi0 (cos^2(theta), -cos(theta), -cos(theta), r^6/(r^6 - sign(Delta))),
    the last entry being 1/(1 - (Delta/2 Omega^2) V(r)) in reduced units.
    """
    if not psi0.is_bound:
        raise NoBoundStateError("molecule_profile needs a bound state.")
    r = grid.points()
    c2 = scales.cos2theta
    c1 = scales.cos_theta
    r6 = r**6
    with np.errstate(divide="ignore", invalid="ignore"):
        saturation = np.where(r6 == scales.detuning_sign, np.inf, r6 / (r6 - scales.detuning_sign))
    base = c2 * psi0.profile
    return PairField(
        EE=c2 * base,
        ES=-c1 * base,
        SE=-c1 * base,
        SS=saturation * base,
        time=0.0,
        frame=Frame.RELATIVE_K0,
        axes=(r,),
        grid=grid,
    )


def antisymmetric_estimate(psi0: EigenState, scales: DerivedScales, grid: Grid1D) -> np.ndarray:
    """|L_abs psi0'/psi0|, the size of |ES - SE| relative to 2 cos^3(theta)|psi0|."""
    derivative = np.gradient(psi0.profile, grid.spacing)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.abs(derivative / psi0.profile) / scales.xi


def fit_bound_size(psi0: EigenState, grid: Grid1D, r_range: tuple[float, float] | None = None) -> float:
    """Decay length of |psi0| from a straight-line fit of log|psi0| against |r|."""
    r = grid.points()
    if r_range is None:
        r_range = (2.0, 0.3 * grid.r_max)
    select = (r >= r_range[0]) & (r <= r_range[1]) & (np.abs(psi0.profile) > 0)
    slope, _ = np.polyfit(r[select], np.log(np.abs(psi0.profile[select])), 1)
    return -1.0 / slope
