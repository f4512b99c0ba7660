"""Closed-form delta-pseudopotential solution of the pair problem.

All quantities are in reduced units (lengths in R_B, energies in 2 Omega^2/|Delta|,
amplitudes in units of cos^4(theta)). Only Delta < 0 is covered; with
eps = gamma/|Delta| and a = 1 + i eps,

    beta = (xi^2/2) / a,    eta = (2 pi/3) a^(-5/6).

Complex powers are written through sqrt(beta) = (xi/sqrt 2) a^(-1/2) and the
argument u = sqrt(beta) eta sqrt(t/2) e^(-i pi/4), which keeps every term on a
branch that is continuous in eps.
"""

import logging
import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize, special

from .errors import InvalidParameterError, NoBoundStateError, NoCrossingError
from .params import DerivedScales

logger = logging.getLogger(__name__)

CERF_MAX_ABS = 1e6
SERIES_MAX_EPS = 0.7
GAMMA_B_COEFFICIENT = 8.0 * math.pi**2 / 27.0  # ~2.924
CROSSOVER_T_MIN = 1e-3
CROSSOVER_T_MAX = 1e4
CROSSOVER_SCAN_POINTS = 2000


def cerf(z):
    """Complex error function.

    Raises:
        InvalidParameterError: For |z| >= 1e6 or when erf(z) overflows.
    """
    values = np.asarray(z, dtype=complex)
    if np.any(np.abs(values) >= CERF_MAX_ABS):
        raise InvalidParameterError("z", complex(values.ravel()[np.argmax(np.abs(values))]), "cerf argument out of range.")
    with np.errstate(over="ignore", invalid="ignore"):
        result = special.erf(values)
    if not np.all(np.isfinite(result)):
        bad = values[~np.isfinite(result)].ravel()[0]
        raise InvalidParameterError("z", complex(bad), "erf overflows at z = {!r}.".format(complex(bad)))
    return result.item() if result.ndim == 0 else result


@dataclass(frozen=True)
class ClosedFormTerms:
    """Constants of the pseudopotential solution at one (xi, gamma/|Delta|)."""

    xi: float
    eps: float
    eta: complex
    beta: complex
    sqrt_beta: complex
    strength: complex
    E0: complex
    gamma_b: float
    r_b: float

    @property
    def beta_eta(self) -> complex:
        return self.beta * self.eta

    @property
    def has_bound_state(self) -> bool:
        return self.beta_eta.real > 0

    @property
    def propagation_energy(self) -> complex:
        """beta eta^2 / 2, the bound-term eigenvalue in the exp(-i lambda t) convention."""
        return self.beta * self.eta**2 / 2.0

    def as_record(self) -> dict:
        return {
            "xi": self.xi,
            "gamma_over_Delta": self.eps,
            "eta": self.eta,
            "beta": self.beta,
            "beta_eta": self.beta_eta,
            "propagation_energy": self.propagation_energy,
            "E0": self.E0,
            "gamma_b": self.gamma_b,
            "r_b": self.r_b,
            "has_bound_state": self.has_bound_state,
        }


def terms_from_ratio(xi: float, gamma_over_Delta: float) -> ClosedFormTerms:
    """ClosedFormTerms from xi and gamma/|Delta| for negative detuning."""
    if not (xi >= 0 and math.isfinite(xi)):
        raise InvalidParameterError("xi", xi)
    if not (gamma_over_Delta >= 0 and math.isfinite(gamma_over_Delta)):
        raise InvalidParameterError("gamma_over_Delta", gamma_over_Delta)
    a = complex(1.0, gamma_over_Delta)
    beta = 0.5 * xi**2 / a
    eta = 2.0 * math.pi / 3.0 * a ** (-5.0 / 6.0)
    sqrt_beta = xi / math.sqrt(2.0) * a**-0.5
    propagation_energy = beta * eta**2 / 2.0
    beta_eta = beta * eta
    return ClosedFormTerms(
        xi=xi,
        eps=gamma_over_Delta,
        eta=eta,
        beta=beta,
        sqrt_beta=sqrt_beta,
        strength=eta,
        E0=-propagation_energy.conjugate(),
        gamma_b=-propagation_energy.imag,
        r_b=1.0 / beta_eta.real if beta_eta.real > 0 else math.inf,
    )


def closed_form_terms(scales: DerivedScales) -> ClosedFormTerms:
    """Raises InvalidParameterError for Delta > 0 (no closed form)."""
    if scales.params.Delta > 0:
        raise InvalidParameterError(
            "Delta", scales.params.Delta, "The closed-form pair solution is only available for Delta < 0."
        )
    return terms_from_ratio(scales.xi, scales.gamma_over_Delta)


def pseudo_strength(scales: DerivedScales, reduced: bool = True) -> complex:
    """Strength of the delta pseudopotential, i.e. the integral of W over the line.

    In reduced units this is eta; otherwise it carries energy_unit * R_B.
    """
    if scales.params.Delta > 0:
        raise InvalidParameterError("Delta", scales.params.Delta, "The pseudopotential strength needs Delta < 0.")
    eta = 2.0 * math.pi / 3.0 * complex(1.0, scales.gamma_over_Delta) ** (-5.0 / 6.0)
    if reduced:
        return eta
    return eta * scales.energy_unit * scales.R_B


class EESplit(NamedTuple):
    total: np.ndarray | complex
    bound: np.ndarray | complex
    continuum: np.ndarray | complex
    has_bound: bool


def _origin_argument(t, terms: ClosedFormTerms):
    return terms.sqrt_beta * terms.eta * np.sqrt(np.asarray(t, dtype=float) / 2.0) * np.exp(-0.25j * math.pi)


def ee_closed_form(r, t, terms: ClosedFormTerms) -> EESplit:
    """Two-photon amplitude of the pseudopotential problem at (r, t).

    `r` and `t` broadcast against each other. The bound part is exactly
    2 exp(-i beta eta^2 t/2 - beta eta |r|); the continuum is the rest.
    When Re(beta eta) <= 0 the bound part is reported as zero and
    `has_bound` is False.
    """
    r = np.abs(np.asarray(r, dtype=float))
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise InvalidParameterError("t", float(np.min(t)), "ee_closed_form needs t > 0.")
    shape = np.broadcast(r, t).shape
    r = np.broadcast_to(r, shape).ravel()
    t = np.broadcast_to(t, shape).ravel()

    beta_eta = terms.beta_eta
    sign = 1.0 if beta_eta.real > 0 else -1.0
    u = _origin_argument(t, terms)
    x = np.exp(0.25j * math.pi) * terms.sqrt_beta * r / np.sqrt(2.0 * t)
    z = -sign * u + x
    A = u**2 - beta_eta * r

    background = special.erf(x)
    # e^A erfc(z), written through erfcx where erfc underflows
    scattered = np.empty(z.shape, dtype=complex)
    right = z.real > 0
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        scattered[right] = np.exp(A[right] - z[right] ** 2) * special.erfcx(z[right])
        scattered[~right] = np.exp(A[~right]) * special.erfc(z[~right])
    total = background + scattered

    if sign > 0:
        bound = 2.0 * np.exp(A)
        continuum = background + (scattered - bound)
    else:
        bound = np.zeros_like(total)
        continuum = total

    def out(values):
        values = values.reshape(shape)
        return values.item() if values.ndim == 0 else values

    return EESplit(out(total), out(bound), out(continuum), sign > 0)


def continuum_asymptote(t, terms: ClosedFormTerms):
    """Large-t continuum at r = 0, -1/(sqrt(pi) u) with u^2 = beta eta^2 t/(2i)."""
    values = -1.0 / (math.sqrt(math.pi) * _origin_argument(t, terms))
    return values.item() if np.ndim(values) == 0 else values


class BoundEnergySeries(NamedTuple):
    E0: complex
    gamma_b: float
    E0_exact: complex
    gamma_b_exact: float


def bound_energy_series(terms: ClosedFormTerms) -> BoundEnergySeries:
    """Second-order expansion of the bound-state energy in gamma/|Delta|.

    E0 = -(pi^2/9) xi^2 (1 - i (8/3)(gamma/Delta) - (44/9)(gamma/Delta)^2) with
    gamma/Delta = -eps, and gamma_b = 2.924 xi^2 eps. The exact values are
    -conj(beta eta^2)/2 and -Im(beta eta^2)/2.
    """
    eps = terms.eps
    if eps > SERIES_MAX_EPS:
        warnings.warn(
            "gamma/|Delta| = {:g} is outside the range of the second-order series.".format(eps), RuntimeWarning, stacklevel=2
        )
    ratio = -eps  # gamma / Delta for Delta < 0
    E0 = -(math.pi**2 / 9.0) * terms.xi**2 * (1.0 - 1j * (8.0 / 3.0) * ratio - (44.0 / 9.0) * ratio**2)
    return BoundEnergySeries(
        E0=E0,
        gamma_b=GAMMA_B_COEFFICIENT * terms.xi**2 * eps,
        E0_exact=terms.E0,
        gamma_b_exact=terms.gamma_b,
    )


def amplitude_decay_rate(terms: ClosedFormTerms) -> float:
    """Exponential rate of |bound(0, t)|."""
    return -(terms.beta * terms.eta**2).imag / 2.0


def bound_size(terms: ClosedFormTerms) -> float:
    """r_b = 1/Re(beta eta) in R_B units."""
    if not terms.has_bound_state:
        raise NoBoundStateError("Re(beta*eta) = {:.6e} <= 0: no bound state.".format(terms.beta_eta.real))
    return 1.0 / terms.beta_eta.real


def _log_amplitude_gap(t, terms: ClosedFormTerms) -> float:
    u = _origin_argument(t, terms)
    log_bound = math.log(2.0) + (u**2).real
    # continuum at r = 0 is -exp(u^2) erfc(u) = -erfcx(u)
    log_continuum = math.log(abs(special.erfcx(u)))
    return log_bound - log_continuum


def crossover_time(terms: ClosedFormTerms, t_max: float = CROSSOVER_T_MAX) -> float:
    """First time at which |continuum(0, t)| overtakes |bound(0, t)|.

    Raises:
        NoBoundStateError: Without a bound state.
        NoCrossingError: If the bound term dominates up to t_max.
    """
    if not terms.has_bound_state:
        raise NoBoundStateError()
    times = np.geomspace(CROSSOVER_T_MIN, t_max, CROSSOVER_SCAN_POINTS)
    gaps = np.array([_log_amplitude_gap(t, terms) for t in times])
    crossings = np.nonzero((gaps[:-1] > 0) & (gaps[1:] <= 0))[0]
    if crossings.size == 0:
        raise NoCrossingError(t_max)
    i = crossings[0]
    t0 = optimize.brentq(_log_amplitude_gap, times[i], times[i + 1], args=(terms,), xtol=1e-12, rtol=1e-12)
    logger.debug("crossover at t0 = %.6g (xi = %g, eps = %g)", t0, terms.xi, terms.eps)
    return t0


def optimal_crossover_estimate(xi: float) -> float:
    """pi/(2 xi^2), the crossover time at gamma/|Delta| = tan(3 pi/16)."""
    return math.pi / (2.0 * xi**2)
