"""Time-domain integration of the two-excitation equations.

Three integrators share the reduced units of :mod:`photonic_molecules.params`
(lengths in R_B, times in 1/energy_unit):

* :func:`evolve_relative` - the four components (EE, ES, SE, SS) in the
  relative coordinate at K = 0;
* :func:`evolve_pair_2d` - the same four components on the (z1, z2) plane with
  a vacuum/medium boundary at z = 0;
* :func:`evolve_schrodinger` - the scalar effective equation with complex mass.

Component index is 2a + b for (particle 1, particle 2) in {E: 0, S: 1}.
"""

import logging
import math
from dataclasses import dataclass, field, replace
from typing import NamedTuple

import numpy as np
from scipy import fft, linalg, sparse
from scipy.sparse import linalg as sparse_linalg
from tqdm import tqdm

from .errors import CFLViolationError, GridTooSmallError, InvalidParameterError, TruncationError
from .fields import Boundary, Frame, Grid1D, PairField, TimeSeries
from .params import DerivedScales, MediumParams, derive_scales, reduced_effective_potential

logger = logging.getLogger(__name__)

DEFAULT_DT = 0.01
# reduced time a masked pair is left to settle into the molecule
PREPARATION_TIME = 20.0
# dt times the fastest coupling into SS must stay below this
COUPLING_STEP_LIMIT = 1.0
BUNCHING_BAND = (5.0, 10.0)
REFERENCE_FLOOR = 1e-6
EDGE_CHECK_INTERVAL = 20

PROFILES = ("photon", "dark", "gaussian", "dsp_pair_masked")


@dataclass(frozen=True)
class PulseSpec:
    """Geometry of the two-dimensional entry problem, lengths in units of L_abs.

    The grid spans [-half_width, half_width) on both axes; the medium fills
    z >= boundary with g ramping over one cell. Each photon enters as a
    Gaussian amplitude of full width at half maximum `width` centered at `center`.
    """

    width: float = 10.0
    center: float = -12.0
    half_width: float = 30.0
    n_points: int = 512
    boundary: float = 0.0
    interior_margin: float = 1.0
    edge_fraction: float = 0.02
    # above the Gibbs floor the one-cell medium edge leaves after FFT advection
    edge_tolerance: float = 1e-4


@dataclass(frozen=True)
class RunConfig:
    """Numerics of one time integration.

    Attributes:
        grid: Relative-coordinate grid (relativeK0 and scalar frames).
        dt: Time step in reduced units.
        t_max: Final time in reduced units.
        K: Center-of-mass wavenumber; only 0 is supported.
        initial_profile: One of "photon" (EE = 1), "dark" (dark-polariton pair),
            "gaussian" and "dsp_pair_masked" (dark pair with SS masked inside R_B).
        width, center: Gaussian profile parameters in R_B units.
        medium: PulseSpec for the two-dimensional entry problem.
        snapshot_times: Times at which full fields are stored; t_max is always stored.
        interacting: Whether the van der Waals interaction is switched on.
        progress: Show a tqdm progress bar.
    """

    grid: Grid1D | None = None
    dt: float = DEFAULT_DT
    t_max: float = 20.0
    K: float = 0.0
    initial_profile: str = "photon"
    width: float = 10.0
    center: float = 0.0
    medium: PulseSpec | None = None
    snapshot_times: tuple[float, ...] = ()
    interacting: bool = True
    progress: bool = False

    def __post_init__(self):
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise InvalidParameterError("dt", self.dt)
        if not (self.t_max > 0 and math.isfinite(self.t_max)):
            raise InvalidParameterError("t_max", self.t_max)
        if self.initial_profile not in PROFILES:
            raise InvalidParameterError("initial_profile", self.initial_profile)

    @property
    def n_steps(self) -> int:
        return max(int(round(self.t_max / self.dt)), 1)

    def snapshot_steps(self) -> dict[int, float]:
        steps = {int(round(t / self.dt)): float(t) for t in self.snapshot_times if 0 <= t <= self.t_max}
        steps[self.n_steps] = self.n_steps * self.dt
        return steps


class Trajectory(NamedTuple):
    """Snapshots of one run.

    `origin` is EE(r = 0, t) in units of cos^4(theta) for the relative and
    scalar frames; `ee_norm` is the L2 norm of EE at the same times.
    """

    snapshots: list[PairField]
    origin: TimeSeries | None
    ee_norm: np.ndarray | None

    @property
    def final(self) -> PairField:
        return self.snapshots[-1]


class ReducedRates(NamedTuple):
    g: float
    Omega: float
    Gamma: complex
    c: float


def reduced_rates(scales: DerivedScales) -> ReducedRates:
    p = scales.params
    return ReducedRates(
        g=scales.reduced_rate(p.g),
        Omega=scales.reduced_rate(p.Omega),
        Gamma=scales.reduced_rate(scales.Gamma),
        c=scales.reduced_c,
    )


def single_particle_matrix(k, g, rates: ReducedRates) -> np.ndarray:
    """Generator of one excitation (E, S) for wavenumbers k, shape (..., 2, 2).

    [[c k - i g^2/Gamma, -i g Omega/Gamma], [-i g Omega/Gamma, -i Omega^2/Gamma]]
    with P adiabatically eliminated. `g` may vary with position.
    """
    k, g = np.broadcast_arrays(np.asarray(k, dtype=float), np.asarray(g, dtype=float))
    h = np.empty(k.shape + (2, 2), dtype=complex)
    h[..., 0, 0] = rates.c * k - 1j * g**2 / rates.Gamma
    h[..., 0, 1] = h[..., 1, 0] = -1j * g * rates.Omega / rates.Gamma
    h[..., 1, 1] = -1j * rates.Omega**2 / rates.Gamma
    return h


def pair_matrix(h1, h2) -> np.ndarray:
    """kron(h1, 1) + kron(1, h2) over leading batch axes."""
    eye = np.eye(2)
    batch = np.broadcast_shapes(h1.shape[:-2], h2.shape[:-2])
    m = np.einsum("...ac,bd->...abcd", h1, eye) + np.einsum("ac,...bd->...abcd", eye, h2)
    return np.broadcast_to(m, batch + (2, 2, 2, 2)).reshape(batch + (4, 4))


def regularized_interaction(r, spacing) -> np.ndarray:
    """Bare V = 1/r^6 in reduced units with V(0) := V(spacing/2)."""
    r = np.abs(np.asarray(r, dtype=float))
    r = np.where(r == 0, 0.5 * spacing, r)
    return r**-6.0


def dark_vector(scales: DerivedScales) -> np.ndarray:
    """cos^2(theta) (cos^2, -cos sin, -sin cos, sin^2): the k = 0 dark-polariton pair."""
    c = scales.cos_theta
    s = math.sqrt(scales.sin2theta)
    return scales.cos2theta * np.array([c * c, -c * s, -s * c, s * s], dtype=complex)


def initial_pair_profile(cfg: RunConfig, grid: Grid1D, scales: DerivedScales) -> np.ndarray:
    """Initial (4, n) relative-frame state, symmetric under exchange."""
    r = grid.points()
    state = np.zeros((4, grid.n_points), dtype=complex)
    if cfg.initial_profile == "photon":
        state[0] = 1.0
        return state
    if cfg.initial_profile == "gaussian":
        envelope = 0.5 * (
            np.exp(-((r - cfg.center) ** 2) / (2.0 * cfg.width**2)) + np.exp(-((r + cfg.center) ** 2) / (2.0 * cfg.width**2))
        )
    else:
        envelope = np.ones_like(r)
    state[:] = dark_vector(scales)[:, None] * envelope[None, :]
    if cfg.initial_profile == "dsp_pair_masked":
        state[3] *= 1.0 - np.exp(-(r**6))
    return symmetrize_relative(state, grid)


def symmetrize_relative(state, grid: Grid1D) -> np.ndarray:
    mirror = grid.mirror_indices()
    out = state.copy()
    out[0] = 0.5 * (state[0] + state[0][mirror])
    out[3] = 0.5 * (state[3] + state[3][mirror])
    out[1] = 0.5 * (state[1] + state[2][mirror])
    out[2] = out[1][mirror]
    return out


def check_step(dt: float, rates: ReducedRates) -> None:
    """Reject time steps that under-resolve the coupling between SS and the photon components."""
    fastest = max(abs(rates.g * rates.Omega / rates.Gamma), abs(rates.Omega**2 / rates.Gamma), 1.0)
    limit = COUPLING_STEP_LIMIT / fastest
    if dt > limit:
        raise CFLViolationError(dt, limit)


def _relative_propagators(cfg: RunConfig, grid: Grid1D, scales: DerivedScales):
    rates = reduced_rates(scales)
    check_step(cfg.dt, rates)
    k = grid.momenta()
    # the Nyquist mode has no -k partner; keep it out of the advection
    k[grid.n_points // 2] = 0.0
    generator = pair_matrix(single_particle_matrix(k, rates.g, rates), single_particle_matrix(-k, rates.g, rates))
    half_step = linalg.expm(-0.5j * cfg.dt * generator)
    if cfg.interacting:
        potential = regularized_interaction(grid.points(), grid.spacing)
        phase = np.exp(-1j * cfg.dt * potential)
    else:
        phase = np.ones(grid.n_points, dtype=complex)
    return half_step, phase


def evolve_relative(cfg: RunConfig, p: MediumParams) -> Trajectory:
    """Relative-coordinate evolution at K = 0.

    Strang splitting: the translation-invariant part (advection of ES/SE plus
    the pairwise coupling) is exponentiated exactly per Fourier mode; the
    interaction is an exact phase on SS per grid point.

    Raises:
        InvalidParameterError: For K != 0 or a non-periodic grid.
        CFLViolationError: If dt under-resolves the coupling into SS.
    """
    if cfg.K != 0:
        raise InvalidParameterError("K", cfg.K, "The relative frame is only implemented for K = 0.")
    scales = derive_scales(p)
    grid = cfg.grid or Grid1D.for_xi(scales.xi)
    if grid.boundary != Boundary.PERIODIC:
        raise InvalidParameterError("boundary", grid.boundary.value, "evolve_relative needs a periodic grid.")
    half_step, phase = _relative_propagators(cfg, grid, scales)
    state = initial_pair_profile(cfg, grid, scales)
    origin = grid.origin_index
    cos4 = scales.cos4theta
    snapshot_steps = cfg.snapshot_steps()
    r = grid.points()

    def apply_uniform(psi):
        spectrum = fft.fft(psi, axis=1)
        spectrum = np.einsum("kab,bk->ak", half_step, spectrum)
        return fft.ifft(spectrum, axis=1)

    times = [0.0]
    origin_values = [state[0, origin] / cos4]
    norms = [np.linalg.norm(state[0]) * math.sqrt(grid.spacing)]
    snapshots = []
    if 0 in snapshot_steps:
        snapshots.append(PairField.from_stack(state, 0.0, Frame.RELATIVE_K0, (r,), grid))

    logger.info("evolve_relative: xi = %g, %d points, %d steps of %g", scales.xi, grid.n_points, cfg.n_steps, cfg.dt)
    for step in tqdm(range(1, cfg.n_steps + 1), desc="relative", disable=not cfg.progress):
        state = apply_uniform(state)
        state[3] *= phase
        state = apply_uniform(state)
        t = step * cfg.dt
        times.append(t)
        origin_values.append(state[0, origin] / cos4)
        norms.append(np.linalg.norm(state[0]) * math.sqrt(grid.spacing))
        if step in snapshot_steps:
            snapshots.append(PairField.from_stack(state, t, Frame.RELATIVE_K0, (r,), grid))

    return Trajectory(snapshots, TimeSeries(np.array(times), np.array(origin_values)), np.array(norms))


def molecule_preparation(cfg: RunConfig, p: MediumParams, t_prep: float = PREPARATION_TIME) -> PairField:
    """Evolve a masked dark-polariton pair for `t_prep` and return the final four-component profile.

    `t_prep` replaces `cfg.t_max`; the grid and the time step come from `cfg`.
    """
    cfg = replace(cfg, initial_profile="dsp_pair_masked", t_max=t_prep)
    return evolve_relative(cfg, p).final


def ee_in_cos4_units(pair: PairField, scales: DerivedScales) -> np.ndarray:
    return pair.EE / scales.cos4theta


def molecule_comparison(pair: PairField, scales: DerivedScales, band=(3.0, 10.0)) -> dict:
    """Deviations of a prepared molecule from the compact four-component vector.

    Returns the worst relative deviation of (ES + SE)/EE from -2/cos(theta)
    and of SS/EE from r^6/(r^6 - sign(Delta))/cos^2(theta) over `band`, the
    SS suppression |SS(0)|/|SS(3 R_B)| and ||ES - SE|| / ||ES + SE||.
    """
    grid = pair.grid
    r = grid.points()
    select = (np.abs(r) >= band[0]) & (np.abs(r) <= band[1])
    symmetric = (pair.ES + pair.SE)[select] / pair.EE[select]
    expected_symmetric = -2.0 / scales.cos_theta
    r6 = r[select] ** 6
    ss_ratio = pair.SS[select] / pair.EE[select]
    expected_ss = r6 / (r6 - scales.detuning_sign) / scales.cos2theta
    at_three = int(np.argmin(np.abs(r - 3.0)))
    return {
        "symmetric_deviation": float(np.max(np.abs(symmetric / expected_symmetric - 1.0))),
        "ss_deviation": float(np.max(np.abs(ss_ratio / expected_ss - 1.0))),
        "ss_suppression": float(abs(pair.SS[grid.origin_index]) / abs(pair.SS[at_three])),
        "antisymmetric_ratio": float(np.linalg.norm(pair.ES - pair.SE) / np.linalg.norm(pair.ES + pair.SE)),
    }


def time_series_at_origin(trajectory: Trajectory) -> TimeSeries:
    if trajectory.origin is None:
        raise InvalidParameterError("trajectory", None, "This trajectory has no origin series.")
    return trajectory.origin


def phase_flatness(pair: PairField, radius: float) -> float:
    """Standard deviation of the unwrapped arg EE over |r| <= radius."""
    r = pair.grid.points()
    select = np.abs(r) <= radius
    if np.count_nonzero(select) < 2:
        raise GridTooSmallError("Fewer than two grid points within |r| <= {:g}.".format(radius))
    return float(np.std(np.unwrap(np.angle(pair.EE[select]))))


# scalar effective equation


def schrodinger_operator(grid: Grid1D, scales: DerivedScales, interacting: bool = True):
    """Sparse -(1/2m) D2 + sin^4(theta) W with three-point differences."""
    n = grid.n_points
    h2 = grid.spacing**2
    main = np.full(n, -2.0 / h2)
    off = np.full(n - 1, 1.0 / h2)
    d2 = sparse.diags([off, main, off], [-1, 0, 1], shape=(n, n), format="lil", dtype=complex)
    if grid.boundary == Boundary.PERIODIC:
        d2[0, n - 1] = d2[n - 1, 0] = 1.0 / h2
    H = (-0.5 / scales.reduced_mass) * d2.tocsc()
    if interacting:
        W = scales.sin4theta * reduced_effective_potential(grid.points(), scales)
        H = H + sparse.diags(W, 0, format="csc")
    return H


def initial_scalar_profile(cfg: RunConfig, grid: Grid1D) -> np.ndarray:
    r = grid.points()
    if cfg.initial_profile == "gaussian":
        return 0.5 * (
            np.exp(-((r - cfg.center) ** 2) / (2.0 * cfg.width**2)) + np.exp(-((r + cfg.center) ** 2) / (2.0 * cfg.width**2))
        ).astype(complex)
    return np.ones(grid.n_points, dtype=complex)


def evolve_schrodinger(cfg: RunConfig, scales: DerivedScales) -> Trajectory:
    """Crank-Nicolson integration of i d(psi)/dt = [-(1/2m) d^2/dr^2 + sin^4(theta) W] psi.

    The amplitude is in units of cos^4(theta) and starts at 1 for the flat
    profiles. The system matrix is factorized once with SuperLU.
    """
    grid = cfg.grid or Grid1D.for_xi(scales.xi)
    H = schrodinger_operator(grid, scales, cfg.interacting)
    identity = sparse.identity(grid.n_points, dtype=complex, format="csc")
    implicit = sparse_linalg.splu((identity + 0.5j * cfg.dt * H).tocsc())
    explicit = (identity - 0.5j * cfg.dt * H).tocsr()

    psi = initial_scalar_profile(cfg, grid)
    r = grid.points()
    origin = grid.origin_index
    zeros = np.zeros_like(psi)
    snapshot_steps = cfg.snapshot_steps()

    def snapshot(values, t):
        return PairField(values.copy(), zeros, zeros, zeros, t, Frame.SCALAR, (r,), grid)

    times = [0.0]
    values = [psi[origin]]
    norms = [np.linalg.norm(psi) * math.sqrt(grid.spacing)]
    snapshots = [snapshot(psi, 0.0)] if 0 in snapshot_steps else []
    for step in tqdm(range(1, cfg.n_steps + 1), desc="schrodinger", disable=not cfg.progress):
        psi = implicit.solve(explicit @ psi)
        t = step * cfg.dt
        times.append(t)
        values.append(psi[origin])
        norms.append(np.linalg.norm(psi) * math.sqrt(grid.spacing))
        if step in snapshot_steps:
            snapshots.append(snapshot(psi, t))
    return Trajectory(snapshots, TimeSeries(np.array(times), np.array(values)), np.array(norms))


def free_gaussian(r, t, sigma, scales: DerivedScales) -> np.ndarray:
    """Exact free evolution of exp(-r^2/(2 sigma^2)) with the complex reduced mass."""
    width2 = sigma**2 + 1j * t / scales.reduced_mass
    return np.sqrt(sigma**2 / width2) * np.exp(-np.asarray(r) ** 2 / (2.0 * width2))


# two-dimensional entry problem


@dataclass
class PairGrid2D:
    z: np.ndarray
    spacing: float
    coupling_class: np.ndarray
    interior: np.ndarray = field(repr=False)


def _pair_grid(spec: PulseSpec, scales: DerivedScales) -> PairGrid2D:
    l_abs = 1.0 / scales.xi  # L_abs in R_B units
    n = spec.n_points
    spacing = 2.0 * spec.half_width * l_abs / n
    z = -spec.half_width * l_abs + spacing * np.arange(n)
    boundary = spec.boundary * l_abs
    # 0: vacuum, 1: boundary cell (half coupling), 2: bulk medium
    coupling_class = np.where(z < boundary, 0, np.where(z < boundary + spacing, 1, 2))
    interior = z >= boundary + spec.interior_margin * l_abs
    return PairGrid2D(z, spacing, coupling_class, interior)


def _local_blocks(pair_grid: PairGrid2D, rates: ReducedRates, dt: float, interacting: bool) -> np.ndarray:
    """exp(-i H_loc dt/2) on every (z1, z2); built from the unique (class, class, |i-j|) blocks."""
    n = pair_grid.z.size
    g_levels = np.array([0.0, 0.5, 1.0]) * rates.g
    local = single_particle_matrix(np.zeros(3), g_levels, rates._replace(c=0.0))
    offsets = np.arange(n) * pair_grid.spacing
    potential = regularized_interaction(offsets, pair_grid.spacing) if interacting else np.zeros(n)

    generator = pair_matrix(local[:, None, None], local[None, :, None])  # (3, 3, 1, 4, 4)
    generator = np.broadcast_to(generator, (3, 3, n, 4, 4)).copy()
    generator[..., 3, 3] += potential[None, None, :]
    blocks = linalg.expm(-0.5j * dt * generator)

    index = np.arange(n)
    cls = pair_grid.coupling_class
    return blocks[cls[:, None], cls[None, :], np.abs(index[:, None] - index[None, :])]


def _edge_weight(state, edge: int) -> float:
    weight = np.sum(np.abs(state) ** 2, axis=0)
    total = weight.sum()
    if total == 0:
        return 0.0
    mask = np.zeros(weight.shape, dtype=bool)
    mask[:edge, :] = mask[-edge:, :] = True
    mask[:, :edge] = mask[:, -edge:] = True
    return float(weight[mask].sum() / total)


def evolve_pair_2d(cfg: RunConfig, p: MediumParams) -> Trajectory:
    """Two photons entering the medium from vacuum, on the (z1, z2) plane.

    Strang splitting: exact free-space advection in Fourier space and the
    exact 4x4 local block (coupling plus interaction) per grid point.

    Raises:
        CFLViolationError: If `cfg.dt` under-resolves the coupling in the bulk medium.
        TruncationError: If the field weight within the edge strip exceeds
            `PulseSpec.edge_tolerance`.
    """
    spec = cfg.medium or PulseSpec()
    scales = derive_scales(p)
    rates = reduced_rates(scales)
    check_step(cfg.dt, rates)
    pair_grid = _pair_grid(spec, scales)
    z = pair_grid.z
    n = z.size
    l_abs = 1.0 / scales.xi

    local = _local_blocks(pair_grid, rates, cfg.dt, cfg.interacting)
    k = 2.0 * np.pi * fft.fftfreq(n, d=pair_grid.spacing)
    k1 = k[:, None]
    k2 = k[None, :]
    advection = np.stack(
        [
            np.exp(-1j * rates.c * (k1 + k2) * cfg.dt),
            np.broadcast_to(np.exp(-1j * rates.c * k1 * cfg.dt), (n, n)),
            np.broadcast_to(np.exp(-1j * rates.c * k2 * cfg.dt), (n, n)),
            np.ones((n, n)),
        ]
    )

    width = spec.width * l_abs
    pulse = np.exp(-4.0 * math.log(2.0) * (z - spec.center * l_abs) ** 2 / width**2)
    state = np.zeros((4, n, n), dtype=complex)
    state[0] = pulse[:, None] * pulse[None, :]

    edge = max(int(spec.edge_fraction * n), 1)
    snapshot_steps = cfg.snapshot_steps()
    snapshots = []
    axes = (z, z)
    if 0 in snapshot_steps:
        snapshots.append(PairField.from_stack(state, 0.0, Frame.LAB2D, axes))

    logger.info("evolve_pair_2d: xi = %g, %d^2 points, %d steps of %g", scales.xi, n, cfg.n_steps, cfg.dt)
    for step in tqdm(range(1, cfg.n_steps + 1), desc="pair 2d", disable=not cfg.progress):
        state = np.einsum("ijab,bij->aij", local, state)
        state = fft.ifft2(advection * fft.fft2(state, axes=(1, 2)), axes=(1, 2))
        state = np.einsum("ijab,bij->aij", local, state)
        t = step * cfg.dt
        if step % EDGE_CHECK_INTERVAL == 0 or step == cfg.n_steps:
            fraction = _edge_weight(state, edge)
            if fraction > spec.edge_tolerance:
                raise TruncationError(t, fraction)
        if step in snapshot_steps:
            snapshots.append(PairField.from_stack(state, t, Frame.LAB2D, axes))
    return Trajectory(snapshots, None, None)


def interior_mask(pair: PairField, p: MediumParams, spec: PulseSpec | None = None) -> np.ndarray:
    """Points with both photons inside the medium, one margin away from its entry face."""
    spec = spec or PulseSpec()
    scales = derive_scales(p)
    inside = _pair_grid(spec, scales).interior
    return inside[:, None] & inside[None, :]


def relative_profile(values, mask) -> tuple[np.ndarray, np.ndarray]:
    """Sum of |EE|^2 along each diagonal z1 - z2 = m, restricted to `mask`."""
    n = values.shape[0]
    index = np.arange(n)
    offset = index[:, None] - index[None, :] + (n - 1)
    weights = np.where(mask, np.abs(values) ** 2, 0.0)
    profile = np.bincount(offset.ravel(), weights=weights.ravel(), minlength=2 * n - 1)
    return np.arange(-(n - 1), n), profile


def bunching_metric(pair: PairField, reference: PairField | None = None, mask=None, band=BUNCHING_BAND) -> float:
    """|EE(r=0)|^2 over the median of |EE(r)|^2 for 5 R_B <= |r| <= 10 R_B.

    For lab2d fields the relative profile is summed over `mask` (both photons
    in the medium) and divided by the same profile of a non-interacting
    `reference` run, which removes the envelope of the pulses.

    Raises:
        GridTooSmallError: If no grid point falls into the reference band.
    """
    if pair.frame == Frame.RELATIVE_K0:
        r = pair.grid.points()
        intensity = np.abs(pair.EE) ** 2
        select = (np.abs(r) >= band[0]) & (np.abs(r) <= band[1])
        if not np.any(select):
            raise GridTooSmallError("No grid point within {} <= |r| <= {} R_B.".format(*band))
        return float(intensity[pair.grid.origin_index] / np.median(intensity[select]))

    if pair.frame != Frame.LAB2D:
        raise InvalidParameterError("frame", pair.frame.value, "bunching_metric needs a pair field.")
    if reference is None:
        raise InvalidParameterError("reference", None, "The two-dimensional metric needs a reference run.")
    if mask is None:
        mask = np.ones(pair.EE.shape, dtype=bool)
    z = pair.axes[0]
    spacing = z[1] - z[0]
    offsets, profile = relative_profile(pair.EE, mask)
    _, reference_profile = relative_profile(reference.EE, mask)
    distance = np.abs(offsets) * spacing
    usable = reference_profile >= REFERENCE_FLOOR * reference_profile.max()
    select = usable & (distance >= band[0]) & (distance <= band[1])
    center = offsets == 0
    if not np.any(select) or not usable[center][0]:
        raise GridTooSmallError("The interior reference band {} <= |r| <= {} R_B is empty.".format(*band))
    ratio = profile[usable] / reference_profile[usable]
    ratio_all = np.full(profile.shape, np.nan)
    ratio_all[usable] = ratio
    return float(ratio_all[center][0] / np.median(ratio_all[select]))
