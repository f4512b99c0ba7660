import numpy as np

from ..Frontend import MsgType
from ..spectral import compute_spectrum, fit_bound_size, size_estimates
from ..TableBuilder import ProfileTableBuilder, write_table
from .ScenarioSupport import GRID_REQUESTS, grid_from_parameters

requested_parameters = [*GRID_REQUESTS]


def get_identifier():
    return "bound-profile"


def get_name():
    return "Bound-State Profile"


def get_description():
    return "Ground bound state against an exponential of size pi/(3 xi^2)"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p, scales = (fe.receive_dict_from_parent("derive")[key] for key in ("params", "scales"))
    grid = grid_from_parameters(ctx.parameters, scales.xi)
    ground = compute_spectrum(p, grid).ground_state()
    r = grid.points()
    psi = ground.profile

    size = size_estimates(scales)["r_b_alt"]  # pi/(3 xi^2)
    shape = np.exp(-np.abs(r) / size)
    # amplitude of the exponential from a least-squares match to |psi|
    amplitude = float(np.sum(np.abs(psi) * shape) / np.sum(shape**2))
    write_table(ctx, "bound_profile.csv", ProfileTableBuilder(r, {"psi": psi}, {"abs_psi": np.abs(psi), "exp_fit": amplitude * shape}))

    fitted = fit_bound_size(ground, grid)
    message_id = fe.message(
        MsgType.OK, "Fitted bound-state size {:.4g} R_B against pi/(3 xi^2) = {:.4g} R_B".format(fitted, size), "Bound State"
    )
    fe.focus_metric(message_id, "fitted_size", fitted)
    fe.focus_metric(message_id, "size_estimate", size)
