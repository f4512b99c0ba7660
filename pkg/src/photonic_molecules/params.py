"""Physical inputs, unit conventions and closed-form derived scales.

Rates are entered as multiples of the intermediate-state decay rate gamma.
The reduced units used by the spectral, analytic and dynamics modules are

    energy_unit = 2 Omega^2 / |Delta|,  length_unit = R_B,  time_unit = 1 / energy_unit,

in which the bare interaction reads V = 1/r^6 and the saturated potential
W = 1/(r^6 + alpha * energy_unit).
"""

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy import integrate

from .errors import (
    IncompleteConfigurationError,
    InvalidParameterError,
    QuadratureError,
    SingularInputError,
)

logger = logging.getLogger(__name__)

QUADRATURE_CUTOFF = 20.0  # R_B units; analytic tails beyond
QUADRATURE_TOLERANCE = 1e-10
BOUND_STATE_TOLERANCE = 1e-10
SINGLE_STATE_XI = math.sqrt(3.0 * math.sqrt(3.0) / math.pi)
VALID_1D_RATIO = 10.0
# |Delta|/gamma above which Re(beta*eta) > 0 in the delta-pseudopotential model
BOUND_STATE_DETUNING = 0.8665


@dataclass(frozen=True)
class MediumParams:
    """Raw physical inputs of a Rydberg-EIT medium.

    Two-photon detuning is zero, the control field is detuned by -Delta.

    Args:
        g: Collective probe coupling [rate].
        Omega: Control Rabi frequency [rate].
        gamma: Decay rate of the intermediate level [rate].
        Delta: Single-photon detuning [rate, signed].
        c: Vacuum speed of light [length/time].
        C6: van der Waals coefficient [rate * length^6].
        lambda_p: Probe wavelength [length], only for the 1-D validity check.
        w: Beam waist [length], only for the 1-D validity check.
        reduced_inputs: The reduced-mode inputs this record was built from, if any.
    """

    g: float
    Omega: float
    gamma: float
    Delta: float
    c: float
    C6: float
    lambda_p: float | None = None
    w: float | None = None
    reduced_inputs: tuple[tuple[str, float], ...] = field(default=(), compare=False)

    def __post_init__(self):
        for name in ("g", "Omega", "gamma", "c", "C6"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise InvalidParameterError(name, value, "{} must be a positive finite number, got {!r}.".format(name, value))
        if not math.isfinite(self.Delta):
            raise InvalidParameterError("Delta", self.Delta)
        for name in ("lambda_p", "w"):
            value = getattr(self, name)
            if value is not None and not (math.isfinite(value) and value > 0):
                raise InvalidParameterError(name, value, "{} must be positive when given, got {!r}.".format(name, value))

    @classmethod
    def from_reduced(
        cls,
        xi: float,
        Delta_over_gamma: float,
        g_over_Omega: float,
        Omega_over_gamma: float = 1.0,
        lambda_p: float | None = None,
        w: float | None = None,
    ) -> "MediumParams":
        """Build physical inputs from (xi, Delta/gamma, g/Omega) with gamma = c = 1.

        C6 is back-solved so that R_B / L_abs equals xi.
        """
        if not (math.isfinite(xi) and xi > 0):
            raise InvalidParameterError("xi", xi, "xi must be positive, got {!r}.".format(xi))
        if not math.isfinite(Delta_over_gamma) or Delta_over_gamma == 0:
            raise InvalidParameterError(
                "Delta_over_gamma", Delta_over_gamma, "Off-resonant reduced units need Delta != 0."
            )
        if not (math.isfinite(g_over_Omega) and g_over_Omega > 0):
            raise InvalidParameterError("g_over_Omega", g_over_Omega)
        if not (math.isfinite(Omega_over_gamma) and Omega_over_gamma > 0):
            raise InvalidParameterError("Omega_over_gamma", Omega_over_gamma)

        gamma = 1.0
        c = 1.0
        Omega = Omega_over_gamma * gamma
        g = g_over_Omega * Omega
        Delta = Delta_over_gamma * gamma
        L_abs = abs(Delta) * c / g**2
        R_B = xi * L_abs
        C6 = R_B**6 * 2.0 * Omega**2 / abs(Delta)
        requested = (
            ("xi", xi),
            ("Delta_over_gamma", Delta_over_gamma),
            ("g_over_Omega", g_over_Omega),
            ("Omega_over_gamma", Omega_over_gamma),
        )
        return cls(g, Omega, gamma, Delta, c, C6, lambda_p, w, requested)

    @property
    def requested(self) -> dict:
        return dict(self.reduced_inputs)


@dataclass(frozen=True)
class ReducedUnits:
    time_unit: float
    length_unit: float
    energy_unit: float


@dataclass(frozen=True)
class DerivedScales:
    """Every closed-form scale derived from a MediumParams record."""

    Gamma: complex
    theta: float
    cos2theta: float
    sin2theta: float
    v_g: float
    L_abs: float
    R_B: float
    xi: float
    m: complex
    alpha: complex
    Omega_e: float
    units: ReducedUnits
    params: MediumParams

    @property
    def detuning_sign(self) -> int:
        return 1 if self.params.Delta > 0 else -1

    @property
    def gamma_over_Delta(self) -> float:
        """gamma / |Delta| (always non-negative)."""
        return self.params.gamma / abs(self.params.Delta)

    @property
    def cos_theta(self) -> float:
        return math.cos(self.theta)

    @property
    def cos4theta(self) -> float:
        return self.cos2theta**2

    @property
    def sin4theta(self) -> float:
        return self.sin2theta**2

    @property
    def energy_unit(self) -> float:
        return self.units.energy_unit

    @property
    def reduced_mass(self) -> complex:
        """m * energy_unit * R_B^2, the mass in reduced units."""
        return self.m * self.units.energy_unit * self.R_B**2

    @property
    def reduced_alpha(self) -> complex:
        """alpha * energy_unit; equals -sign(Delta) + i*gamma/|Delta|."""
        return self.alpha * self.units.energy_unit

    @property
    def reduced_c(self) -> float:
        """Vacuum light speed in R_B per reduced time unit."""
        return self.params.c / (self.R_B * self.units.energy_unit)

    @property
    def reduced_group_velocity(self) -> float:
        return self.v_g / (self.R_B * self.units.energy_unit)

    def reduced_rate(self, rate):
        return rate / self.units.energy_unit

    def as_record(self) -> dict:
        """Flat JSON-ready record; complex values are split into Re_/Im_ keys."""
        p = self.params
        values = {
            "g": p.g,
            "Omega": p.Omega,
            "gamma": p.gamma,
            "Delta": p.Delta,
            "c": p.c,
            "C6": p.C6,
            "Gamma": self.Gamma,
            "theta": self.theta,
            "cos2theta": self.cos2theta,
            "sin2theta": self.sin2theta,
            "v_g": self.v_g,
            "L_abs": self.L_abs,
            "R_B": self.R_B,
            "xi": self.xi,
            "m": self.m,
            "alpha": self.alpha,
            "Omega_e": self.Omega_e,
            "time_unit": self.units.time_unit,
            "length_unit": self.units.length_unit,
            "energy_unit": self.units.energy_unit,
            "reduced_mass": self.reduced_mass,
            "reduced_alpha": self.reduced_alpha,
            "gamma_over_Delta": self.gamma_over_Delta,
        }
        if p.lambda_p is not None:
            values["lambda_p"] = p.lambda_p
        if p.w is not None:
            values["w"] = p.w
        record = {}
        for key, value in values.items():
            if isinstance(value, complex):
                record["Re_" + key] = value.real
                record["Im_" + key] = value.imag
            else:
                record[key] = value
        if p.reduced_inputs:
            record["requested"] = p.requested
        return record


def derive_scales(p: MediumParams) -> DerivedScales:
    """Compute all derived quantities of a medium.

    Raises:
        InvalidParameterError: If Delta is zero.
    """
    if p.Delta == 0:
        raise InvalidParameterError("Delta", p.Delta, "Off-resonant scales are undefined for Delta = 0.")

    Gamma = complex(p.gamma, p.Delta)
    theta = math.atan2(p.g, p.Omega)
    Omega_e2 = p.g**2 + p.Omega**2
    cos2theta = p.Omega**2 / Omega_e2
    sin2theta = p.g**2 / Omega_e2
    v_g = p.c * cos2theta
    L_abs = abs(p.Delta) * p.c / p.g**2
    m = 1j * p.g**2 / (4.0 * p.c * Gamma * v_g)
    alpha = (1j * p.gamma - p.Delta) / (2.0 * p.Omega**2)
    energy_unit = 2.0 * p.Omega**2 / abs(p.Delta)

    requested_xi = p.requested.get("xi")
    if requested_xi is not None:
        # reduced-mode inputs: keep the requested xi exact
        xi = requested_xi
        R_B = xi * L_abs
    else:
        R_B = (abs(p.Delta) * p.C6 / (2.0 * p.Omega**2)) ** (1.0 / 6.0)
        xi = R_B / L_abs

    units = ReducedUnits(time_unit=1.0 / energy_unit, length_unit=R_B, energy_unit=energy_unit)
    return DerivedScales(
        Gamma=Gamma,
        theta=theta,
        cos2theta=cos2theta,
        sin2theta=sin2theta,
        v_g=v_g,
        L_abs=L_abs,
        R_B=R_B,
        xi=xi,
        m=m,
        alpha=alpha,
        Omega_e=math.sqrt(Omega_e2),
        units=units,
        params=p,
    )


def _as_output(values):
    return values.item() if np.ndim(values) == 0 else values


def bare_potential(r, p: MediumParams):
    """C6 / r^6; singular at r = 0."""
    r = np.abs(np.asarray(r, dtype=float))
    if np.any(r == 0):
        raise SingularInputError()
    return _as_output(p.C6 / r**6)


def effective_potential(r, p: MediumParams):
    """Saturated interaction W = V / (1 + alpha V), finite at r = 0 where W = 1/alpha."""
    alpha = (1j * p.gamma - p.Delta) / (2.0 * p.Omega**2)
    r = np.asarray(r, dtype=float)
    return _as_output(1.0 / (r**6 / p.C6 + alpha))


def reduced_effective_potential(r, scales: DerivedScales):
    """W in energy units for r in R_B units."""
    r = np.asarray(r, dtype=float)
    return _as_output(1.0 / (r**6 + scales.reduced_alpha))


def susceptibility(r, p: MediumParams):
    return _as_output(-1j * (p.g**2 / p.Omega**2) * np.asarray(effective_potential(r, p)))


class PolaritonProperties(NamedTuple):
    v_g: float
    bright_velocity: float
    bright_loss_rate: float


def polariton_properties(p: MediumParams) -> PolaritonProperties:
    scales = derive_scales(p)
    return PolaritonProperties(
        v_g=scales.v_g,
        bright_velocity=p.c * scales.sin2theta,
        bright_loss_rate=p.gamma * scales.Omega_e**2 / p.Delta**2,
    )


def _even_line_integral(integrand, tail, quantity):
    """Integral over the whole line of an even function of r (R_B units).

    The integrand is integrated on [0, QUADRATURE_CUTOFF]; `tail` is the
    analytic remainder beyond the cutoff.
    """
    options = dict(points=(1.0,), limit=200, epsabs=QUADRATURE_TOLERANCE, epsrel=QUADRATURE_TOLERANCE)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            real, _ = integrate.quad(lambda r: complex(integrand(r)).real, 0.0, QUADRATURE_CUTOFF, **options)
            imag, _ = integrate.quad(lambda r: complex(integrand(r)).imag, 0.0, QUADRATURE_CUTOFF, **options)
        except integrate.IntegrationWarning as warning:
            raise QuadratureError(quantity, str(warning)) from warning
    return 2.0 * (complex(real, imag) + tail)


_TAIL_R6 = QUADRATURE_CUTOFF**-5 / 5.0
_TAIL_R5 = QUADRATURE_CUTOFF**-4 / 4.0


def integrated_potential(scales: DerivedScales) -> complex:
    """Integral of W over the line, in energy_unit * R_B."""
    a = scales.reduced_alpha
    return _even_line_integral(lambda r: 1.0 / (r**6 + a), _TAIL_R6, "integral of W")


def integrated_abs_potential(scales: DerivedScales) -> float:
    a = scales.reduced_alpha
    return _even_line_integral(lambda r: abs(1.0 / (r**6 + a)), _TAIL_R6, "integral of |W|").real


def integrated_moment_potential(scales: DerivedScales) -> float:
    """Integral of |r| |W| over the line, in energy_unit * R_B^2."""
    a = scales.reduced_alpha
    return _even_line_integral(lambda r: r * abs(1.0 / (r**6 + a)), _TAIL_R5, "integral of |r||W|").real


def bound_state_functional(p: MediumParams) -> complex:
    """Dimensionless m * integral(W) * L_abs."""
    scales = derive_scales(p)
    return scales.reduced_mass * integrated_potential(scales) / scales.xi


def bound_state_condition(p: MediumParams) -> bool:
    """Sufficient condition for a bound state: Re(m * integral(W)) < 0.

    For Delta > 0 the value is computed and logged but carries no guarantee.
    """
    value = bound_state_functional(p)
    exists = value.real < -BOUND_STATE_TOLERANCE
    if p.Delta > 0:
        logger.info("Delta > 0: Re(m * int W) * L_abs = %.6e, predicate %s", value.real, exists)
    else:
        logger.debug("Re(m * int W) * L_abs = %.6e", value.real)
    return exists


def bound_state_exists(p: MediumParams) -> bool:
    """Delta-pseudopotential criterion Re(beta * eta) > 0 (|Delta| > 0.8665 gamma)."""
    if p.Delta >= 0:
        return False
    eps = p.gamma / abs(p.Delta)
    return math.cos(11.0 / 6.0 * math.atan(eps)) > 0


class BoundStateEstimate(NamedTuple):
    N_bound_max: int
    single_state: bool


def max_bound_states(p: MediumParams) -> BoundStateEstimate:
    scales = derive_scales(p)
    moment = integrated_moment_potential(scales)
    n_max = math.floor(1.0 + 2.0 * abs(scales.reduced_mass) * moment)
    return BoundStateEstimate(N_bound_max=n_max, single_state=scales.xi <= SINGLE_STATE_XI)


class EnergyBound(NamedTuple):
    bound: float
    closed_form: float
    quadrature: float
    printed_bound: float


def energy_bound(p: MediumParams) -> EnergyBound:
    """Bound on |E_n| for the complex potential, in energy units.

    `bound` uses (|m|/2)(int |W|)^2, the constant that holds for the
    -(1/2m) d^2/dr^2 kinetic term; `printed_bound` keeps the |m|/4 prefactor.
    `closed_form` is the weak-loss value (xi^2/2)(2 pi/3)^2 and `quadrature`
    its counterpart |m| (int |W|)^2 at finite loss.
    """
    scales = derive_scales(p)
    integral = integrated_abs_potential(scales)
    mass = abs(scales.reduced_mass)
    return EnergyBound(
        bound=0.5 * mass * integral**2,
        closed_form=0.5 * scales.xi**2 * (2.0 * math.pi / 3.0) ** 2,
        quadrature=mass * integral**2,
        printed_bound=0.25 * mass * integral**2,
    )


class DimensionalityCheck(NamedTuple):
    ratio: float
    valid_1d: bool


def dimensionality_check(p: MediumParams) -> DimensionalityCheck:
    missing = [name for name in ("lambda_p", "w") if getattr(p, name) is None]
    if missing:
        raise IncompleteConfigurationError(missing, "dimensionality_check")
    scales = derive_scales(p)
    ratio = scales.xi / math.sqrt(p.lambda_p * scales.L_abs / (2.0 * math.pi * p.w**2))
    return DimensionalityCheck(ratio=ratio, valid_1d=ratio >= VALID_1D_RATIO)
