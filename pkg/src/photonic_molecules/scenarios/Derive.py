from ..errors import IncompleteConfigurationError
from ..Frontend import MsgType
from ..params import bound_state_condition, bound_state_exists, derive_scales, dimensionality_check, energy_bound, max_bound_states
from ..TableBuilder import write_json
from .ScenarioSupport import PARAMS_REQUEST, medium_from_config

requested_parameters = [PARAMS_REQUEST]


def get_identifier():
    return "derive"


def get_name():
    return "Derived Scales"


def get_description():
    return "Mixing angle, group velocity, length scales, mass and the bound-state criteria of the medium"


def get_parent_rules_identifiers():
    return []


def apply(ctx):
    fe = ctx.frontend
    p = medium_from_config(ctx.parameters["params"])  # reduced or physical inputs
    scales = derive_scales(p)  # units, mixing angle, R_B, L_abs

    record = scales.as_record()
    estimate = max_bound_states(p)
    bound = energy_bound(p)
    record["bound_state_exists"] = bound_state_exists(p)
    record["bound_state_condition"] = bound_state_condition(p)
    record["N_bound_max"] = estimate.N_bound_max
    record["single_state"] = estimate.single_state
    record["energy_bound"] = bound.bound
    record["energy_bound_closed_form"] = bound.closed_form
    record["energy_bound_quadrature"] = bound.quadrature
    try:
        check = dimensionality_check(p)  # needs lambda_p and w
    except IncompleteConfigurationError:
        pass  # no geometry given, nothing to check
    else:
        record["dimensionality_ratio"] = check.ratio
        record["valid_1d"] = check.valid_1d
        if not check.valid_1d:
            fe.message(
                MsgType.WARNING,
                "xi / sqrt(lambda_p L_abs / (2 pi w^2)) = {:.3g}: the one-dimensional model is not justified.".format(
                    check.ratio
                ),
            )

    message_id = fe.message(
        MsgType.OK,
        "xi = {:.6g}, R_B = {:.6g}, L_abs = {:.6g}, v_g/c = {:.6g}".format(
            scales.xi, scales.R_B, scales.L_abs, scales.cos2theta
        ),
        "Derived Scales",
    )
    fe.focus_metric(message_id, "xi", scales.xi)
    fe.focus_metric(message_id, "bound_state_exists", record["bound_state_exists"])
    write_json(ctx, "derived_scales.json", record)
    fe.send_dict_to_children({"params": p, "scales": scales})  # every other rule starts from these
