from ..dynamics import bunching_metric, evolve_relative, time_series_at_origin
from ..Frontend import MsgType
from ..TableBuilder import ComplexSeriesTableBuilder, ProfileTableBuilder, write_table
from .ScenarioSupport import GRID_REQUESTS, TIME_REQUESTS, grid_from_parameters, optional, run_config

requested_parameters = [
    *GRID_REQUESTS,
    *TIME_REQUESTS,
    optional("numerics.initial_profile", "photon"),
    optional("numerics.width", 10.0),
    optional("numerics.center", 0.0),
]


def get_identifier():
    return "evolve-rel"


def get_name():
    return "Relative-Coordinate Evolution"


def get_description():
    return "Split-step evolution of the four-component pair amplitude at zero center-of-mass momentum"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p, scales = (fe.receive_dict_from_parent("derive")[key] for key in ("params", "scales"))
    grid = grid_from_parameters(ctx.parameters, scales.xi)
    cfg = run_config(
        ctx.parameters,
        grid,
        initial_profile=ctx.parameters["initial_profile"],
        width=float(ctx.parameters["width"]),
        center=float(ctx.parameters["center"]),
    )
    trajectory = evolve_relative(cfg, p)
    final = trajectory.final
    origin = time_series_at_origin(trajectory)  # EE(0, t) in cos^4 units

    write_table(
        ctx,
        "pair_final.csv",
        ProfileTableBuilder(grid.points(), {"EE": final.EE, "ES": final.ES, "SE": final.SE, "SS": final.SS}),
    )
    write_table(ctx, "origin_series.csv", ComplexSeriesTableBuilder("t", origin.times, {"EE": origin.values}, True))

    message_id = fe.message(MsgType.OK, "Evolved {} steps to t = {:g}".format(cfg.n_steps, final.time), "Evolution")
    fe.focus_metric(message_id, "bunching_metric", bunching_metric(final))
    fe.focus_metric(message_id, "exchange_asymmetry", final.exchange_asymmetry())  # stays at rounding level
