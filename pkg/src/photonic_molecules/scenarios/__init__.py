"""Scenario rules and their registry.

Every rule module exposes ``get_identifier``, ``get_name``,
``get_description``, ``get_parent_rules_identifiers``, a module-level
``requested_parameters`` list and ``apply(ctx)``. A registry entry binds a
scenario name to a rule module plus configuration values: ``defaults`` fill
keys the user left out, ``fixed`` pin the parameters a reproduction run is defined at.
"""

import copy
import logging
from typing import NamedTuple

from ..errors import InvalidParameterError
from ..Frontend import Frontend, ScenarioContext
from ..RequestedParameters import RequestedParametersParser, apply_override, lookup, reject_unknown
from . import (
    Analytic,
    AmplitudeComparison,
    AmplitudeSeries,
    BoundProfile,
    Derive,
    EvolvePair2D,
    EvolveRelative,
    GroundEnergy,
    Greens,
    Homodyne,
    MoleculeComponents,
    PhaseMap,
    PhaseSeries,
    PotentialProfile,
    Spectrum,
)
from .ScenarioSupport import NUMERICS_KEYS, PARAMETER_KEYS

logger = logging.getLogger(__name__)


class Scenario(NamedTuple):
    module: object
    fixed: dict = {}
    defaults: dict = {}


def _reduced(xi, Delta_over_gamma, g_over_Omega):
    return {
        "params.xi": xi,
        "params.Delta_over_gamma": Delta_over_gamma,
        "params.g_over_Omega": g_over_Omega,
        "params.Omega_over_gamma": 1.0,
    }


REGISTRY = {
    "derive": Scenario(Derive),
    "spectrum": Scenario(Spectrum),
    "evolve-rel": Scenario(EvolveRelative),
    "evolve-2d": Scenario(EvolvePair2D),
    "analytic": Scenario(Analytic),
    "greens": Scenario(Greens),
    "homodyne": Scenario(Homodyne),
    "pair-map-weak": Scenario(EvolvePair2D, _reduced(0.2, -4.0, 1.0)),
    "pair-map-strong": Scenario(EvolvePair2D, _reduced(2.0, -4.0, 1.0)),
    "potential-profile": Scenario(PotentialProfile, _reduced(1.0, -8.0, 100.0)),
    "ground-energy": Scenario(GroundEnergy, _reduced(0.2, -12.0, 100.0)),
    "bound-profile": Scenario(BoundProfile, _reduced(0.2, -12.0, 100.0)),
    "amplitude-comparison": Scenario(AmplitudeComparison, _reduced(0.2, -4.0, 100.0)),
    "molecule-components": Scenario(
        MoleculeComponents,
        {"params.xi": 0.2, "params.g_over_Omega": 20.0, "params.Omega_over_gamma": 1.0},
        {"params.Delta_over_gamma": -4.0},
    ),
    "amplitude-series": Scenario(
        AmplitudeSeries,
        {"params.xi": 0.2, "params.g_over_Omega": 100.0, "params.Omega_over_gamma": 1.0},
        {"params.Delta_over_gamma": -1.5},
    ),
    "phase-series": Scenario(
        PhaseSeries,
        {"params.xi": 0.2, "params.g_over_Omega": 100.0, "params.Omega_over_gamma": 1.0},
        {"params.Delta_over_gamma": -12.0},
    ),
    "phase-map": Scenario(PhaseMap, _reduced(0.2, -12.0, 100.0)),
}

# reproduction identifiers used in configs and run directories ("figure:5" runs in runs/figure-5)
FIGURE_ALIASES = {
    "figure:1c": "pair-map-weak",
    "figure:1d": "pair-map-strong",
    "figure:2": "potential-profile",
    "figure:4a": "ground-energy",
    "figure:4b": "bound-profile",
    "figure:5": "amplitude-comparison",
    "figure:6": "molecule-components",
    "figure:7": "amplitude-series",
    "figure:8": "phase-series",
    "figure:9": "phase-map",
}
REGISTRY.update({alias: REGISTRY[name] for alias, name in FIGURE_ALIASES.items()})

RULES = {module.get_identifier(): module for module in {entry.module for entry in REGISTRY.values()}}


def scenario_names():
    return list(REGISTRY)


def allowed_keys():
    keys = {"scenario", "output_dir", "params", "numerics", "sweep.*"}
    keys.update("params." + key for key in PARAMETER_KEYS)
    keys.update("numerics." + key for key in NUMERICS_KEYS)
    return keys


def get_scenario(name) -> Scenario:
    try:
        return REGISTRY[name]
    except KeyError:
        raise InvalidParameterError(
            "scenario", name, "Unknown scenario {!r}; known: {}.".format(name, ", ".join(REGISTRY))
        ) from None


def resolve_config(config: dict) -> dict:
    """Validate a configuration and merge the scenario's defaults and fixed values into a copy.

    Raises:
        UnknownParameterError: For keys no scenario understands.
        InvalidParameterError: For an unknown scenario name.
    """
    reject_unknown(config, allowed_keys())
    scenario = get_scenario(config.get("scenario"))
    resolved = copy.deepcopy(config)
    for key, value in scenario.defaults.items():
        if lookup(resolved, key, None) is None:
            apply_override(resolved, key, value)
    for key, value in scenario.fixed.items():
        apply_override(resolved, key, value)
    return resolved


def _rule_chain(module):
    chain = []
    for parent in module.get_parent_rules_identifiers():
        for rule in _rule_chain(RULES[parent]):
            if rule not in chain:
                chain.append(rule)
    chain.append(module)
    return chain


def execute(config: dict, output_dir, frontend: Frontend | None = None, files: list | None = None) -> ScenarioContext:
    """Run the scenario of a resolved configuration after its parent rules.

    Returns the context of the last rule; `files` collects every written file.
    """
    scenario = get_scenario(config["scenario"])
    frontend = frontend or Frontend()
    files = [] if files is None else files
    ctx = None
    for rule in _rule_chain(scenario.module):
        fe = frontend.for_child(rule.get_identifier())
        parameters = RequestedParametersParser(fe, config).parse(rule.requested_parameters)
        ctx = ScenarioContext(config, output_dir, fe, parameters, files)
        logger.info("running %s (%s)", rule.get_identifier(), rule.get_name())
        rule.apply(ctx)
    return ctx
