import numpy as np

from ..analytic import closed_form_terms, crossover_time, ee_closed_form
from ..dynamics import evolve_relative, time_series_at_origin
from ..errors import NoCrossingError
from ..Frontend import MsgType
from ..TableBuilder import RecordTableBuilder, write_table
from .ScenarioSupport import GRID_REQUESTS, grid_from_parameters, optional, run_config

requested_parameters = [
    *GRID_REQUESTS,
    optional("numerics.dt"),
    optional("numerics.t_max", 200.0),
    optional("numerics.t_points", 1000),
    optional("numerics.with_numeric", False),  # adds a direct integration
]


def get_identifier():
    return "amplitude-series"


def get_name():
    return "Amplitude Decay"


def get_description():
    return "Bound and continuum amplitudes of EE(0, t) and their crossover"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p, scales = (fe.receive_dict_from_parent("derive")[key] for key in ("params", "scales"))
    terms = closed_form_terms(scales)
    t_max = float(ctx.parameters["t_max"])
    n = int(ctx.parameters["t_points"])
    times = np.linspace(t_max / n, t_max, n)
    split = ee_closed_form(0.0, times, terms)

    rows = [
        {"t": t, "abs_total": abs(total), "abs_bound": abs(bound), "abs_continuum": abs(continuum)}
        for t, total, bound, continuum in zip(times, split.total, split.bound, split.continuum)
    ]
    columns = ["t", "abs_total", "abs_bound", "abs_continuum"]
    if ctx.parameters["with_numeric"]:
        grid = grid_from_parameters(ctx.parameters, scales.xi)
        origin = time_series_at_origin(evolve_relative(run_config(ctx.parameters, grid, initial_profile="dark"), p))
        numeric = np.interp(times, origin.times, np.abs(origin.values))
        for row, value in zip(rows, numeric):
            row["abs_numeric"] = value
        columns.append("abs_numeric")
    write_table(ctx, "amplitude_series.csv", RecordTableBuilder(rows, columns))

    message_id = fe.message(MsgType.OK, "Bound decay rate {:.4g}".format(terms.gamma_b), "Amplitudes")
    try:
        t0 = crossover_time(terms)
    except NoCrossingError as error:
        fe.message(MsgType.WARNING, str(error), "Crossover")
    else:
        fe.focus_metric(message_id, "crossover_time", t0)
