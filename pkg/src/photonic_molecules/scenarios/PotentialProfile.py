from dataclasses import replace

import numpy as np

from ..Frontend import MsgType
from ..params import derive_scales, reduced_effective_potential
from ..TableBuilder import ComplexSeriesTableBuilder, write_table
from .ScenarioSupport import optional

requested_parameters = [optional("numerics.r_max", 3.0), optional("numerics.r_points", 601)]


def get_identifier():
    return "potential-profile"


def get_name():
    return "Effective Potential"


def get_description():
    return "Effective potential W(r) for positive and negative single-photon detuning of equal size"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p = fe.receive_dict_from_parent("derive")["params"]
    r = np.linspace(0.0, float(ctx.parameters["r_max"]), int(ctx.parameters["r_points"]))
    negative = replace(p, Delta=-abs(p.Delta), reduced_inputs=())  # same medium, both detuning signs
    positive = replace(p, Delta=abs(p.Delta), reduced_inputs=())
    W_pos = reduced_effective_potential(r, derive_scales(positive))
    W_neg = reduced_effective_potential(r, derive_scales(negative))
    write_table(ctx, "potential.csv", ComplexSeriesTableBuilder("r", r, {"W_pos": W_pos, "W_neg": W_neg}))

    peak = int(np.argmax(np.abs(W_pos)))  # resonance where r^6 = 1
    message_id = fe.message(
        MsgType.OK, "|W| for Delta > 0 peaks at r = {:.4g} R_B".format(r[peak]), "Effective Potential"
    )
    fe.focus_metric(message_id, "resonance_radius", float(r[peak]))
