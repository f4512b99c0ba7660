import numpy as np

from ..analytic import amplitude_decay_rate, bound_energy_series, closed_form_terms, crossover_time, ee_closed_form
from ..errors import NoBoundStateError, NoCrossingError
from ..Frontend import MsgType
from ..TableBuilder import ComplexSeriesTableBuilder, write_json, write_table
from .ScenarioSupport import optional

requested_parameters = [
    optional("numerics.t_max", 20.0),
    optional("numerics.r_max", 100.0),
    optional("numerics.r_points", 801),
]


def get_identifier():
    return "analytic"


def get_name():
    return "Pseudopotential Solution"


def get_description():
    return "Closed-form bound and continuum parts of the pair amplitude for a contact interaction"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    scales = fe.receive_dict_from_parent("derive")["scales"]
    terms = closed_form_terms(scales)  # contact-interaction constants
    t = float(ctx.parameters["t_max"])
    r_max = float(ctx.parameters["r_max"])
    r = np.linspace(-r_max, r_max, int(ctx.parameters["r_points"]))
    split = ee_closed_form(r, t, terms)
    write_table(
        ctx,
        "ee_analytic.csv",
        ComplexSeriesTableBuilder("r", r, {"total": split.total, "bound": split.bound, "continuum": split.continuum}, True),
    )

    series = bound_energy_series(terms)
    record = terms.as_record()
    record.update(
        {
            "t": t,
            "E0_series": series.E0,
            "gamma_b_series": series.gamma_b,
            "amplitude_decay_rate": amplitude_decay_rate(terms),
        }
    )
    message_id = fe.message(MsgType.OK, "E0 = {:.6g}, r_b = {:.6g} R_B".format(terms.E0, terms.r_b), "Closed Form")
    fe.focus_metric(message_id, "gamma_b", terms.gamma_b)
    try:
        t0 = crossover_time(terms)  # bound and continuum of equal size
    except (NoBoundStateError, NoCrossingError) as error:
        fe.message(MsgType.WARNING, str(error), "Crossover")
    else:
        record["crossover_time"] = t0
        fe.focus_metric(message_id, "crossover_time", t0)
    write_json(ctx, "analytic_terms.json", record)
