import warnings

from ..errors import NoBoundStateError
from ..Frontend import MsgType
from ..spectral import CoarseGridWarning, compute_spectrum, fit_bound_size, ground_energy_law, size_estimates
from ..TableBuilder import ProfileTableBuilder, SpectrumTableBuilder, write_json, write_table
from .ScenarioSupport import GRID_REQUESTS, grid_from_parameters, optional

requested_parameters = [*GRID_REQUESTS, optional("numerics.method", "difference")]


def get_identifier():
    return "spectrum"


def get_name():
    return "Pair Spectrum"


def get_description():
    return "Diagonalization of the effective relative-coordinate Hamiltonian and bound-state classification"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    parent = fe.receive_dict_from_parent("derive")
    p, scales = parent["params"], parent["scales"]
    grid = grid_from_parameters(ctx.parameters, scales.xi)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", CoarseGridWarning)
        spectrum = compute_spectrum(p, grid, ctx.parameters["method"])  # dense, all eigenpairs
    for warning in caught:
        fe.message(MsgType.OPTIMIZATION, str(warning.message), "Grid Resolution")  # coarse grid hint

    write_table(ctx, "spectrum.csv", SpectrumTableBuilder([spectrum]))
    summary = {
        "xi": scales.xi,
        "n_bound": spectrum.n_bound,
        "n_bound_in_window": spectrum.n_bound_in_window,
        "energy_window": spectrum.energy_window,
        "literal_window": spectrum.literal_window,
        "localization_radius": spectrum.localization_radius,
        "law_E0": ground_energy_law(scales.xi),
        "grid": grid.as_record(),
        "size_estimates": size_estimates(scales),
    }
    message_id = fe.message(MsgType.OK, "{} bound state(s) at xi = {:g}".format(spectrum.n_bound, scales.xi), "Spectrum")
    fe.focus_metric(message_id, "n_bound", spectrum.n_bound)
    try:
        ground = spectrum.ground_state()
    except NoBoundStateError:
        fe.message(MsgType.WARNING, "No bound state was found on this grid.")
    else:
        summary["E0"] = ground.energy
        fe.focus_metric(message_id, "Re_E0", ground.energy.real)
        fe.focus_metric(message_id, "Im_E0", ground.energy.imag)
        if scales.params.Delta < 0:  # tail fit assumes a real bound state
            summary["fitted_size"] = fit_bound_size(ground, grid)
        write_table(ctx, "ground_state.csv", ProfileTableBuilder(grid.points(), {"psi": ground.profile}))
    write_json(ctx, "spectrum_summary.json", summary)
