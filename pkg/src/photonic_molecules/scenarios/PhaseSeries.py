import numpy as np

from ..analytic import closed_form_terms, ee_closed_form
from ..fields import TimeSeries
from ..Frontend import MsgType
from ..homodyne import bound_phase, continuum_phase, unwrapped_phase
from ..TableBuilder import RecordTableBuilder, write_table
from .ScenarioSupport import optional

requested_parameters = [optional("numerics.t_max", 200.0), optional("numerics.t_points", 1000)]


def get_identifier():
    return "phase-series"


def get_name():
    return "Phases"


def get_description():
    return "Phases of the bound and continuum parts of EE(0, t) with the asymptotic continuum phase"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    scales = fe.receive_dict_from_parent("derive")["scales"]
    terms = closed_form_terms(scales)
    t_max = float(ctx.parameters["t_max"])
    n = int(ctx.parameters["t_points"])
    times = np.linspace(t_max / n, t_max, n)  # t = 0 excluded, continuum ~ t^(-1/2)
    split = ee_closed_form(0.0, times, terms)

    total = unwrapped_phase(TimeSeries(times, split.total)).values
    continuum = unwrapped_phase(TimeSeries(times, split.continuum)).values
    bound = bound_phase(times, terms)
    limit = continuum_phase(scales)  # long-time continuum phase
    rows = [
        {"t": t, "phase_total": a, "phase_bound": b, "phase_continuum": c, "continuum_phase_limit": limit}
        for t, a, b, c in zip(times, total, bound, continuum)
    ]
    write_table(ctx, "phase_series.csv", RecordTableBuilder(rows))

    message_id = fe.message(
        MsgType.OK, "Continuum phase approaches {:.4f} rad".format(limit), "Phases"
    )
    fe.focus_metric(message_id, "continuum_phase_limit", limit)
    fe.focus_metric(message_id, "bound_phase_slope", -0.5 * (terms.beta * terms.eta**2).real)
