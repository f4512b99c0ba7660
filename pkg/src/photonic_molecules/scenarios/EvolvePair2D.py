from dataclasses import replace

from ..dynamics import DEFAULT_DT, RunConfig, bunching_metric, evolve_pair_2d, interior_mask
from ..Frontend import MsgType
from ..TableBuilder import MapTableBuilder, write_table
from .ScenarioSupport import optional, pulse_spec

requested_parameters = [
    optional("numerics.dt", DEFAULT_DT),  # the step check runs against the bulk coupling
    optional("numerics.t_max", 40.0),
    optional("numerics.pulse_points"),  # PulseSpec default when unset
    optional("numerics.pulse_half_width"),
    optional("numerics.map_stride", 4),  # every 4th point per axis in the CSV maps
]


def get_identifier():
    return "evolve-2d"


def get_name():
    return "Entry Into the Medium"


def get_description():
    return "Two photons propagating from vacuum into the medium on the (z1, z2) plane, with a non-interacting reference"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p = fe.receive_dict_from_parent("derive")["params"]
    spec = pulse_spec(ctx.parameters)

    cfg = RunConfig(dt=float(ctx.parameters["dt"]), t_max=float(ctx.parameters["t_max"]), medium=spec)
    final = evolve_pair_2d(cfg, p).final
    reference = evolve_pair_2d(replace(cfg, interacting=False), p).final
    mask = interior_mask(final, p, spec)
    metric = bunching_metric(final, reference, mask)

    z1, z2 = final.axes
    stride = int(ctx.parameters["map_stride"])
    write_table(ctx, "ee_map.csv", MapTableBuilder(z1, z2, final.EE, stride))
    write_table(ctx, "ee_map_reference.csv", MapTableBuilder(z1, z2, reference.EE, stride))

    verdict = "bunched" if metric > 1.0 else "anti-bunched"
    message_id = fe.message(
        MsgType.OK, "Pair correlation at t = {:g} is {} (B = {:.4g})".format(final.time, verdict, metric), "Bunching"
    )
    fe.focus_metric(message_id, "bunching_metric", metric)
    fe.focus_metric(message_id, "exchange_asymmetry", final.exchange_asymmetry())
