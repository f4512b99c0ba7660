"""Frequency-domain Green's functions of the pair problem.

Conventions (reduced units unless a docstring says otherwise):

* G(omega) = (H - omega)^-1 with H = p^2/(2m) + v_g K + sin^4(theta) W.
* :func:`free_green` is the printed coordinate form -exp(i k |x|)/(2 i k),
  k = sqrt(2m(omega - v_g K)) with Im k > 0. It is the kernel of (p^2 - k^2)^-1;
  the kernel of (H0 - omega)^-1 is 2m times it.
* Real omega is used throughout; Im(m) > 0 keeps poles and cuts off the axis.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import legendre
from scipy import linalg, signal, special
from tqdm import tqdm

from .errors import (
    ConvergenceError,
    IllConditionedError,
    InvalidFrequencyError,
    InvalidParameterError,
    ResonanceError,
)
from .fields import Grid1D
from .params import DerivedScales, MediumParams, derive_scales, reduced_effective_potential

logger = logging.getLogger(__name__)

RESONANCE_TOLERANCE = 1e-12
CONDITION_LIMIT = 1e12
NYSTROM_RESIDUAL_LIMIT = 1e-8
CELL_NODES = 8
SYNTHESIS_POINTS = 512
SYNTHESIS_CHANGE_LIMIT = 0.01
BRANCH_TOLERANCE = 1e-14


def _wavenumber(omega, K, scales: DerivedScales):
    """k = sqrt(2m(omega - v_g K)) on the branch Im k > 0."""
    k = np.sqrt(2.0 * scales.reduced_mass * (np.asarray(omega, dtype=complex) - scales.reduced_group_velocity * K))
    k = np.where(k.imag < 0, -k, k)
    if np.any(np.abs(k.imag) <= BRANCH_TOLERANCE * np.maximum(np.abs(k), 1.0)):
        raise InvalidFrequencyError(complex(np.ravel(omega)[0]))
    return k


def free_green(r, r_prime, omega, K, scales: DerivedScales):
    """-exp(i k |r - r'|)/(2 i k) with k = sqrt(2m(omega - v_g K)), Im k > 0.

    Raises:
        InvalidFrequencyError: If no branch with Im k > 0 exists.
    """
    k = _wavenumber(omega, K, scales)
    distance = np.abs(np.asarray(r, dtype=float) - np.asarray(r_prime, dtype=float))
    values = -np.exp(1j * k * distance) / (2j * k)
    return values.item() if np.ndim(values) == 0 else values


def free_green_momentum(p, omega, K, scales: DerivedScales):
    """1/(p^2/(2m) - omega + v_g K); Fourier-transforms to 2m * free_green."""
    return 1.0 / (np.asarray(p) ** 2 / (2.0 * scales.reduced_mass) - omega + scales.reduced_group_velocity * K)


@dataclass(frozen=True)
class FreqQuantities:
    """Frequency-dependent coefficients at (omega, K), physical units."""

    alpha11: complex
    alpha00: complex
    gamma_factor: complex
    m0: complex
    Lambda0: complex
    omega: float
    K: float


def _checked(quantity, numerator, denominator, scale, omega):
    if abs(denominator) <= RESONANCE_TOLERANCE * max(scale, 1e-300):
        raise ResonanceError(quantity, omega)
    return numerator / denominator


def freq_quantities(omega, K, p: MediumParams) -> FreqQuantities:
    """Closed-form coefficient functions; omega is a physical rate, K a physical wavenumber.

    Raises:
        ResonanceError: If a denominator vanishes to within 1e-12 of its scale.
    """
    g2 = p.g**2
    O2 = p.Omega**2
    G = complex(p.gamma, p.Delta)
    cK = p.c * K
    w = complex(omega)

    alpha11 = _checked("alpha11", 1j * G, (cK - w) * 1j * G - 2.0 * g2, abs(cK - w) * abs(G) + 2.0 * g2, omega)
    gamma_factor = _checked(
        "gamma_factor", 2.0 * O2 - 1j * w * G, 2.0 * g2 - 1j * (w - cK) * G, 2.0 * g2 + abs(w - cK) * abs(G), omega
    )
    alpha00 = _checked("alpha00", 1j * G, 2.0 * O2 - 1j * w * G, 2.0 * O2 + abs(w) * abs(G), omega)
    m0 = _checked(
        "m0",
        O2 * g2 * (g2 + O2 + (cK / 2.0 - w) * 1j * G),
        1j * G * (2j * O2 + w * G) ** 2 * p.c**2,
        abs(G) * (2.0 * O2 + abs(w) * abs(G)) ** 2 * p.c**2,
        omega,
    )
    Lambda0 = _checked(
        "Lambda0",
        (2.0 * O2 - 1j * w * G)
        * (2.0 * g2 + 2.0 * O2 + 1j * cK * G - 2j * w * G)
        * (2.0 * w * g2 - (cK - w) * (2.0 * O2 - 1j * w * G)),
        4.0 * g2 * O2 * (2.0 * g2 - 1j * G * (w - cK)),
        4.0 * g2 * O2 * (2.0 * g2 + abs(G) * abs(w - cK)),
        omega,
    )
    return FreqQuantities(alpha11, alpha00, gamma_factor, m0, Lambda0, float(complex(omega).real), K)


def effective_potential_freq(r, omega, p: MediumParams):
    """V/(1 + alpha00(omega) V) for physical r and omega; 1/alpha00 at r = 0."""
    alpha00 = freq_quantities(omega, 0.0, p).alpha00
    r = np.asarray(r, dtype=float)
    values = 1.0 / (r**6 / p.C6 + alpha00)
    return values.item() if values.ndim == 0 else values


@dataclass
class GreenMatrix:
    grid: Grid1D
    omega: complex
    K: float
    values: np.ndarray
    residual: float


def cell_averaged_potential(grid: Grid1D, scales: DerivedScales, nodes: int = CELL_NODES) -> np.ndarray:
    """sin^4(theta) W averaged over each grid cell with Gauss-Legendre nodes."""
    x, w = legendre.leggauss(nodes)
    r = grid.points()[:, None] + 0.5 * grid.spacing * x[None, :]
    return scales.sin4theta * (reduced_effective_potential(r, scales) @ (0.5 * w))


def _free_kernel(grid: Grid1D, omega, K, scales: DerivedScales) -> np.ndarray:
    r = grid.points()
    return 2.0 * scales.reduced_mass * free_green(r[:, None], r[None, :], omega, K, scales)


class _Operator:
    """I + G0' diag(sin^4 W h), LU-factorized, for one frequency."""

    def __init__(self, grid: Grid1D, omega, K, scales: DerivedScales, potential=None, check_condition=True):
        self.grid = grid
        self.omega = omega
        self.kernel = _free_kernel(grid, omega, K, scales)
        if potential is None:
            potential = cell_averaged_potential(grid, scales)
        self.matrix = np.eye(grid.n_points, dtype=complex) + self.kernel * (potential * grid.spacing)[None, :]
        self.lu = linalg.lu_factor(self.matrix, check_finite=False)
        if check_condition:
            anorm = np.linalg.norm(self.matrix, 1)
            rcond, _ = linalg.lapack.zgecon(self.lu[0], anorm, norm="1")
            if rcond == 0 or 1.0 / rcond > CONDITION_LIMIT:
                raise IllConditionedError(omega, math.inf if rcond == 0 else 1.0 / rcond)

    def solve(self, rhs):
        return linalg.lu_solve(self.lu, rhs, check_finite=False)


def solve_green_nystrom(grid: Grid1D, omega, K, p: MediumParams, interacting: bool = True) -> GreenMatrix:
    """Dense Nystrom solution of G = G0' - G0' sin^4(theta) W G on the grid.

    G0' = 2m free_green, W is averaged over each cell and the quadrature
    weights are the grid spacing. With `interacting=False` the result is G0'.

    Raises:
        IllConditionedError: Condition estimate above 1e12.
        ConvergenceError: Relative residual of the linear system above 1e-8.
    """
    scales = derive_scales(p)
    potential = None if interacting else np.zeros(grid.n_points)
    operator = _Operator(grid, omega, K, scales, potential)
    values = operator.solve(operator.kernel)
    residual = float(np.linalg.norm(operator.matrix @ values - operator.kernel) / np.linalg.norm(operator.kernel))
    if residual > NYSTROM_RESIDUAL_LIMIT:
        raise ConvergenceError("Nystrom residual", residual, NYSTROM_RESIDUAL_LIMIT)
    return GreenMatrix(grid, omega, K, values, residual)


def green_norm_scan(omegas, grid: Grid1D, p: MediumParams, K: float = 0.0, progress: bool = False) -> np.ndarray:
    """Frobenius norm of G(omega) * spacing over a list of real frequencies."""
    norms = []
    for omega in tqdm(omegas, desc="green scan", disable=not progress):
        norms.append(np.linalg.norm(solve_green_nystrom(grid, omega, K, p).values) * grid.spacing)
    return np.array(norms)


def locate_poles(omegas, norms) -> np.ndarray:
    """Frequencies of the interior local maxima of ||G||."""
    peaks, _ = signal.find_peaks(np.asarray(norms))
    return np.asarray(omegas)[peaks]


def _applied_hamiltonian(f, grid: Grid1D, scales: DerivedScales, potential):
    """H f with three-point differences, f taken as zero outside the grid."""
    padded = np.concatenate([[0.0], f, [0.0]])
    d2 = (padded[2:] - 2.0 * padded[1:-1] + padded[:-2]) / grid.spacing**2
    return -0.5 / scales.reduced_mass * d2 + potential * f


def _synthesis_nodes(cutoff: float, n_points: int):
    """Midpoint nodes of omega = s|s| on |omega| <= cutoff and their weights."""
    half = math.sqrt(cutoff)
    ds = 2.0 * half / n_points
    s = -half + ds * (np.arange(n_points) + 0.5)
    return s * np.abs(s), 2.0 * np.abs(s) * ds


def _tail_correction(f, hf, times, cutoff):
    """Contribution of |omega| > cutoff from G ~ -1/omega - H/omega^2."""
    out = []
    for t in times:
        si, _ = special.sici(cutoff * t)
        remainder = 0.5 * math.pi - si
        first = f * remainder / math.pi
        second = -hf * (math.cos(cutoff * t) / cutoff - t * remainder) / (math.pi * 1j)
        out.append(first + second)
    return np.array(out)


def _synthesize(f, times, grid, scales, p, n_points, cutoff, prefactor, potential, progress):
    omegas, weights = _synthesis_nodes(cutoff, n_points)
    times = np.asarray(times, dtype=float)
    result = np.zeros((times.size, grid.n_points), dtype=complex)
    for omega, weight in tqdm(zip(omegas, weights), total=omegas.size, desc="synthesis", disable=not progress):
        operator = _Operator(grid, omega, 0.0, scales, potential, check_condition=False)
        response = operator.solve(operator.kernel @ (f * grid.spacing))
        factor = weight / (2j * math.pi)
        if prefactor == "gamma":
            gamma_factor = freq_quantities(omega * scales.energy_unit, 0.0, p).gamma_factor
            factor *= gamma_factor**2 / scales.cos4theta
        result += factor * np.exp(-1j * omega * times)[:, None] * response[None, :]
    if prefactor == "cos4":
        result += _tail_correction(f, _applied_hamiltonian(f, grid, scales, potential), times, cutoff)
    return result


def synthesis_cutoff(scales: DerivedScales) -> float:
    """Omega^2/|Gamma| in energy units."""
    return scales.params.Omega**2 / abs(scales.Gamma) / scales.energy_unit


def synthesize_ee(
    initial_profile,
    times,
    grid: Grid1D,
    p: MediumParams,
    n_points: int = SYNTHESIS_POINTS,
    prefactor: str = "cos4",
    interacting: bool = True,
    check_convergence: bool = True,
    progress: bool = False,
) -> np.ndarray:
    """EE(r, t) in units of cos^4(theta) from the frequency integral of G f.

    The omega integral runs over |omega| <= Omega^2/|Gamma| with the
    substitution omega = s|s| and the midpoint rule; the range beyond the
    window is added from the large-omega expansion of G (cos4 prefactor
    only). With "gamma" the factor gamma(omega)^2/cos^4(theta) is kept
    inside the integral.

    Raises:
        ConvergenceError: If doubling the number of frequencies changes the
            result by more than 1% (relative L2).
    """
    if prefactor not in ("cos4", "gamma"):
        raise InvalidParameterError("prefactor", prefactor)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times <= 0):
        raise InvalidParameterError("times", float(times.min()), "synthesize_ee needs t > 0.")
    scales = derive_scales(p)
    f = np.asarray(initial_profile, dtype=complex)
    if f.shape != (grid.n_points,):
        raise InvalidParameterError("initial_profile", f.shape, "The initial profile must live on the grid.")
    cutoff = synthesis_cutoff(scales)
    potential = cell_averaged_potential(grid, scales) if interacting else np.zeros(grid.n_points)
    spacing_limit = math.pi / (8.0 * times.max())
    largest_step = float(np.max(_synthesis_nodes(cutoff, n_points)[1]))
    if largest_step > spacing_limit:
        n_points = int(math.ceil(n_points * largest_step / spacing_limit))
        logger.info("synthesize_ee: raised the number of frequencies to %d", n_points)

    result = _synthesize(f, times, grid, scales, p, n_points, cutoff, prefactor, potential, progress)
    if check_convergence:
        refined = _synthesize(f, times, grid, scales, p, 2 * n_points, cutoff, prefactor, potential, progress)
        change = float(np.linalg.norm(refined - result) / np.linalg.norm(refined))
        if change > SYNTHESIS_CHANGE_LIMIT:
            raise ConvergenceError("synthesized EE", change, SYNTHESIS_CHANGE_LIMIT)
        result = refined
    return result
