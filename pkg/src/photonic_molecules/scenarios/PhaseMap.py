import numpy as np

from ..dynamics import ee_in_cos4_units, evolve_relative, phase_flatness
from ..Frontend import MsgType
from ..TableBuilder import MapTableBuilder, write_table
from .ScenarioSupport import GRID_REQUESTS, grid_from_parameters, optional, run_config

requested_parameters = [
    *GRID_REQUESTS,
    optional("numerics.dt"),
    optional("numerics.t_max", 20.0),
    optional("numerics.t_points", 40),
    optional("numerics.r_max", 60.0),  # extent of the written map
    optional("numerics.radius", 10.0),  # R_B
]


def get_identifier():
    return "phase-map"


def get_name():
    return "Phase Map"


def get_description():
    return "Amplitude and phase of EE(r, t) inside the medium"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p, scales = (fe.receive_dict_from_parent("derive")[key] for key in ("params", "scales"))
    grid = grid_from_parameters(ctx.parameters, scales.xi)
    t_max = float(ctx.parameters["t_max"])
    n = int(ctx.parameters["t_points"])
    times = tuple(np.linspace(t_max / n, t_max, n))
    cfg = run_config(ctx.parameters, grid, initial_profile="dark", snapshot_times=times)
    snapshots = evolve_relative(cfg, p).snapshots

    r = grid.points()
    select = np.abs(r) <= float(ctx.parameters["r_max"])
    values = np.stack([ee_in_cos4_units(pair, scales)[select] for pair in snapshots], axis=1)
    sampled = [pair.time for pair in snapshots]
    write_table(ctx, "phase_map.csv", MapTableBuilder(r[select], sampled, values, names=("r", "t")))

    flatness = phase_flatness(snapshots[-1], float(ctx.parameters["radius"]))
    message_id = fe.message(
        MsgType.OK, "Phase spread of EE within |r| <= {:g} R_B: {:.3g} rad".format(ctx.parameters["radius"], flatness), "Phase"
    )
    fe.focus_metric(message_id, "phase_flatness", flatness)
