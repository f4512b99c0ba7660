"""Helpers shared by the scenario rules: medium construction, grids and run numerics."""

from collections.abc import Mapping

from ..dynamics import DEFAULT_DT, PulseSpec, RunConfig
from ..errors import IncompleteConfigurationError, InvalidParameterError
from ..fields import Grid1D
from ..params import MediumParams
from ..RequestedParameters import Importance, ParameterRequest

REDUCED_KEYS = ("xi", "Delta_over_gamma", "g_over_Omega", "Omega_over_gamma")
PHYSICAL_KEYS = ("g", "Omega", "gamma", "Delta", "c", "C6")
GEOMETRY_KEYS = ("lambda_p", "w")
PARAMETER_KEYS = ("mode",) + REDUCED_KEYS + PHYSICAL_KEYS + GEOMETRY_KEYS
MODES = ("reduced", "physical")

# numerics keys understood by at least one scenario
NUMERICS_KEYS = (
    "grid_length",
    "grid_points",
    "method",
    "dt",
    "t_max",
    "t_points",
    "initial_profile",
    "width",
    "center",
    "xi_list",
    "workers",
    "r_max",
    "r_points",
    "omega_points",
    "omega_min",
    "omega_max",
    "synthesis_points",
    "prefactor",
    "phi_LO",
    "pulse_points",
    "pulse_half_width",
    "map_stride",
    "with_numeric",
    "radius",
)


def medium_from_config(params: Mapping) -> MediumParams:
    """MediumParams from either the reduced set or the physical set of keys.

    `mode` ("reduced" or "physical") is optional; without it the mode follows
    the keys present.

    Raises:
        InvalidParameterError: If both sets are mixed or the mode is unknown.
        IncompleteConfigurationError: If the chosen set is incomplete.
    """
    reduced = [key for key in REDUCED_KEYS if key in params]
    physical = [key for key in PHYSICAL_KEYS if key in params]
    if reduced and physical:
        raise InvalidParameterError(
            "params", sorted(reduced + physical), "The params block mixes reduced and physical inputs."
        )
    mode = params.get("mode")
    if mode is not None and mode not in MODES:
        raise InvalidParameterError("params.mode", mode, "params.mode must be \"reduced\" or \"physical\".")
    geometry = {key: params[key] for key in GEOMETRY_KEYS if key in params}
    if mode == "reduced" or (mode is None and reduced):
        missing = [key for key in ("xi", "Delta_over_gamma", "g_over_Omega") if key not in params]
        if missing:
            raise IncompleteConfigurationError(missing, "The reduced params block")
        return MediumParams.from_reduced(
            float(params["xi"]),
            float(params["Delta_over_gamma"]),
            float(params["g_over_Omega"]),
            float(params.get("Omega_over_gamma", 1.0)),
            **geometry,
        )
    missing = [key for key in PHYSICAL_KEYS if key not in params]
    if missing:
        raise IncompleteConfigurationError(missing, "The physical params block")
    return MediumParams(**{key: float(params[key]) for key in PHYSICAL_KEYS}, **geometry)


def grid_from_parameters(parameters, xi: float) -> Grid1D:
    """Explicit grid when numerics.grid_length and numerics.grid_points are set, else Grid1D.for_xi."""
    length = parameters["numerics.grid_length"]
    points = parameters["numerics.grid_points"]
    if length is None and points is None:
        return Grid1D.for_xi(xi)
    if length is None or points is None:
        missing = ["numerics.grid_length" if length is None else "numerics.grid_points"]
        raise IncompleteConfigurationError(missing, "An explicit grid")
    return Grid1D.symmetric(float(length), int(points))


def run_config(parameters, grid: Grid1D | None, **fixed) -> RunConfig:
    values = {
        "grid": grid,
        "dt": float(parameters["numerics.dt"] or DEFAULT_DT),
        "t_max": float(parameters["numerics.t_max"]),
    }
    values.update(fixed)
    return RunConfig(**values)


def pulse_spec(parameters) -> PulseSpec:
    defaults = PulseSpec()
    return PulseSpec(
        n_points=int(parameters["numerics.pulse_points"] or defaults.n_points),
        half_width=float(parameters["numerics.pulse_half_width"] or defaults.half_width),
    )


def optional(name, default=None, warn=False) -> ParameterRequest:
    return ParameterRequest(name, name.rpartition(".")[2], Importance.OPTIONAL, default, warn)


PARAMS_REQUEST = ParameterRequest("params", "params", Importance.REQUIRED)
GRID_REQUESTS = [optional("numerics.grid_length"), optional("numerics.grid_points")]
TIME_REQUESTS = [optional("numerics.dt"), optional("numerics.t_max", 20.0)]
