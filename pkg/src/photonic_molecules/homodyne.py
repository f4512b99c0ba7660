"""Phase analysis of the two-photon amplitude at r = 0.

The detection model is an ideal quadrature projection of the complex field
amplitude on a local-oscillator phase; no noise or mode-matching loss.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .analytic import ClosedFormTerms
from .errors import FitRejectedError, InvalidParameterError, NoBoundStateError
from .fields import TimeSeries
from .params import DerivedScales, MediumParams, derive_scales

logger = logging.getLogger(__name__)

FIT_RESIDUAL_LIMIT = 0.1
FIT_T_MIN = 2.0
OBSERVABLE = "quadrature projection Im[EE(0, t) exp(-i phi_LO)]"


def continuum_phase_from_ratio(gamma_over_Delta: float) -> float:
    """-3 pi/4 + (4/3) arctan(gamma/|Delta|)."""
    return -0.75 * math.pi + 4.0 / 3.0 * math.atan(gamma_over_Delta)


def continuum_phase(p: MediumParams | DerivedScales) -> float:
    """Large-t phase of the continuum term; depends only on gamma/|Delta|."""
    scales = p if isinstance(p, DerivedScales) else derive_scales(p)
    if scales.params.Delta > 0:
        raise InvalidParameterError("Delta", scales.params.Delta, "The continuum phase law needs Delta < 0.")
    return continuum_phase_from_ratio(scales.gamma_over_Delta)


def bound_phase(t, terms: ClosedFormTerms):
    """Unwrapped phase of 2 exp(-i beta eta^2 t/2), i.e. -Re(beta eta^2) t/2."""
    if not terms.has_bound_state:
        raise NoBoundStateError()
    values = -0.5 * (terms.beta * terms.eta**2).real * np.asarray(t, dtype=float)
    return values.item() if values.ndim == 0 else values


def unwrapped_phase(series: TimeSeries) -> TimeSeries:
    """arg of a complex series, unwrapped along t at jumps larger than pi."""
    return TimeSeries(series.times, np.unwrap(np.angle(series.values), discont=math.pi))


def quadrature_filter(series: TimeSeries, phi_LO: float) -> TimeSeries:
    """Q(t) = Im[series(t) exp(-i phi_LO)].

    With phi_LO at the continuum phase the continuum drops out asymptotically.
    """
    return TimeSeries(series.times, np.imag(np.asarray(series.values) * np.exp(-1j * phi_LO)))


@dataclass(frozen=True)
class ComponentFit:
    """A_b exp(-i lambda t) + A_c t^(-1/2) fitted to EE(0, t); E0_fit = -conj(lambda)."""

    A_b: complex
    E0_fit: complex
    A_c: complex
    phi_c: float
    residual: float
    t_window: tuple[float, float]

    @property
    def propagation_energy(self) -> complex:
        return -self.E0_fit.conjugate()

    def model(self, t):
        t = np.asarray(t, dtype=float)
        return self.A_b * np.exp(-1j * self.propagation_energy * t) + self.A_c / np.sqrt(t)

    def as_record(self) -> dict:
        return {
            "A_b": self.A_b,
            "E0_fit": self.E0_fit,
            "A_c": self.A_c,
            "phi_c": self.phi_c,
            "residual": self.residual,
            "t_window": list(self.t_window),
            "observable": OBSERVABLE,
        }


def _basis(times, lam):
    return np.column_stack([np.exp(-1j * lam * times), 1.0 / np.sqrt(times)])


def _linear_part(times, values, lam):
    basis = _basis(times, lam)
    coefficients, *_ = np.linalg.lstsq(basis, values, rcond=None)
    return coefficients, basis @ coefficients - values


def separate_components(series: TimeSeries, terms: ClosedFormTerms, t_min: float = FIT_T_MIN) -> ComponentFit:
    """Least-squares split of EE(0, t) into a bound and a t^(-1/2) continuum term.

    The amplitudes enter linearly and are eliminated for every trial
    eigenvalue; only Re/Im of lambda are optimized, starting from the
    closed-form value in `terms`. Samples before `t_min` are ignored.

    Raises:
        FitRejectedError: Relative L2 misfit above 0.1.
    """
    window = series.window(t_min=t_min)
    if window.times.size < 4:
        raise InvalidParameterError("series", window.times.size, "separate_components needs at least 4 samples with t >= t_min.")
    times = window.times
    values = np.asarray(window.values, dtype=complex)

    def residuals(x):
        _, misfit = _linear_part(times, values, complex(x[0], x[1]))
        return np.concatenate([misfit.real, misfit.imag])

    start = terms.propagation_energy
    solution = optimize.least_squares(residuals, [start.real, start.imag], method="lm", xtol=1e-14, ftol=1e-14)
    lam = complex(solution.x[0], solution.x[1])
    (A_b, A_c), misfit = _linear_part(times, values, lam)
    residual = float(np.linalg.norm(misfit) / np.linalg.norm(values))
    t_window = (float(times[0]), float(times[-1]))
    fit = ComponentFit(
        A_b=complex(A_b),
        E0_fit=-lam.conjugate(),
        A_c=complex(A_c),
        phi_c=float(np.angle(A_c)),
        residual=residual,
        t_window=t_window,
    )
    if residual > FIT_RESIDUAL_LIMIT:
        raise FitRejectedError(residual, FIT_RESIDUAL_LIMIT, fit.as_record())
    logger.debug("component fit: E0 = %s, phi_c = %.4f, residual = %.2e", fit.E0_fit, fit.phi_c, residual)
    return fit


def interference_period(fit: ComponentFit) -> float:
    """2 pi/|Re E0_fit|, the beat period of |EE(0, t)|."""
    if fit.E0_fit.real == 0:
        return math.inf
    return 2.0 * math.pi / abs(fit.E0_fit.real)
