import numpy as np

from ..dynamics import PREPARATION_TIME, molecule_comparison, molecule_preparation
from ..Frontend import MsgType
from ..params import reduced_effective_potential
from ..TableBuilder import ProfileTableBuilder, write_table
from .ScenarioSupport import GRID_REQUESTS, grid_from_parameters, optional, run_config

requested_parameters = [
    *GRID_REQUESTS,
    optional("numerics.dt"),
    optional("numerics.t_max", PREPARATION_TIME),  # preparation time
]


def get_identifier():
    return "molecule-components"


def get_name():
    return "Photonic Molecule"


def get_description():
    return "Four-component structure of a prepared molecule, each component scaled to the relative wave function"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p, scales = (fe.receive_dict_from_parent("derive")[key] for key in ("params", "scales"))
    grid = grid_from_parameters(ctx.parameters, scales.xi)
    pair = molecule_preparation(run_config(ctx.parameters, grid), p, float(ctx.parameters["t_max"]))
    r = grid.points()
    c = scales.cos_theta

    # every column reduces to psi0 for the compact molecule, SS up to r^6/(r^6 - sign(Delta))
    components = {
        "EE": pair.EE / c**4,
        "ES_plus": -(pair.ES + pair.SE) / (2.0 * c**3),
        "ES_minus": (pair.ES - pair.SE) / (2.0 * c**3),
        "SS": pair.SS / c**2,
        "WEE": scales.sin4theta * reduced_effective_potential(r, scales) * pair.EE / c**4,
    }
    write_table(ctx, "molecule_components.csv", ProfileTableBuilder(r, components))

    comparison = molecule_comparison(pair, scales)
    message_id = fe.message(
        MsgType.OK,
        "SS is suppressed by a factor {:.3g} inside the blockade".format(1.0 / max(comparison["ss_suppression"], 1e-300)),
        "Molecule Structure",
    )
    for name, value in comparison.items():
        fe.focus_metric(message_id, name, value)
    fe.focus_metric(message_id, "detuning_sign", scales.detuning_sign)
    if not np.isfinite(comparison["ss_deviation"]):
        fe.message(MsgType.WARNING, "SS/EE is singular inside the comparison band.")
