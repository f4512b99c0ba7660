import math

from ..Frontend import MsgType
from ..spectral import spectrum_vs_xi
from ..TableBuilder import RecordTableBuilder, SpectrumTableBuilder, write_table
from .ScenarioSupport import GRID_REQUESTS, grid_from_parameters, optional

requested_parameters = [
    *GRID_REQUESTS,
    optional("numerics.xi_list", [0.1, 0.2, 0.3, 0.4, 0.6, 0.8, 1.0, 1.2, 1.5, 2.0]),
    optional("numerics.workers", 1),  # threads
]


def get_identifier():
    return "ground-energy"


def get_name():
    return "Bound-State Energies"


def get_description():
    return "Bound-state energies against xi with the weak-interaction ground-energy law"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p = fe.receive_dict_from_parent("derive")["params"]
    xi_list = [float(xi) for xi in ctx.parameters["xi_list"]]
    grid = None  # per-xi default grids
    if ctx.parameters["numerics.grid_length"] is not None or ctx.parameters["numerics.grid_points"] is not None:
        grid = grid_from_parameters(ctx.parameters, xi_list[0])
    scan = spectrum_vs_xi(xi_list, p, grid, int(ctx.parameters["workers"]))

    write_table(ctx, "spectrum.csv", SpectrumTableBuilder(scan.spectra, bound_only=True))
    write_table(ctx, "ground_energy.csv", RecordTableBuilder(scan.rows))

    message_id = fe.message(
        MsgType.OK, "Bound-state counts: {}".format(", ".join(str(row["n_bound"]) for row in scan.rows)), "Spectrum Scan"
    )
    deviations = [
        abs(row["Re_E0"] / row["law_E0"] - 1.0) for row in scan.rows if row["xi"] <= 0.4 and not math.isnan(row["Re_E0"])  # small-xi law only
    ]
    if deviations:
        fe.focus_metric(message_id, "max_law_deviation", max(deviations), "xi <= 0.4")
