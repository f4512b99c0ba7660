import numpy as np

from ..analytic import closed_form_terms, crossover_time, ee_closed_form
from ..errors import NoCrossingError
from ..fields import TimeSeries
from ..Frontend import MsgType
from ..homodyne import OBSERVABLE, continuum_phase, interference_period, quadrature_filter, separate_components
from ..TableBuilder import RecordTableBuilder, write_json, write_table
from .ScenarioSupport import optional

requested_parameters = [
    optional("numerics.t_max"),
    optional("numerics.t_points", 2000),
    optional("numerics.phi_LO"),  # continuum phase when unset
]

DEFAULT_T_MAX = 200.0


def get_identifier():
    return "homodyne"


def get_name():
    return "Homodyne Separation"


def get_description():
    return "Quadrature filtering and bound/continuum separation of the pair amplitude at r = 0"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    scales = fe.receive_dict_from_parent("derive")["scales"]
    terms = closed_form_terms(scales)
    t_max = ctx.parameters["t_max"]
    if t_max is None:
        try:
            t_max = max(4.0 * crossover_time(terms), DEFAULT_T_MAX)  # several crossover times
        except NoCrossingError:
            t_max = DEFAULT_T_MAX  # no crossing for this detuning
    t_max = float(t_max)
    times = np.linspace(t_max / int(ctx.parameters["t_points"]), t_max, int(ctx.parameters["t_points"]))
    series = TimeSeries(times, np.asarray(ee_closed_form(0.0, times, terms).total))

    phi_c = continuum_phase(scales)
    phi_LO = phi_c if ctx.parameters["phi_LO"] is None else float(ctx.parameters["phi_LO"])
    filtered = quadrature_filter(series, phi_LO)
    write_table(ctx, "filtered_series.csv", RecordTableBuilder([{"t": t, "Q": q} for t, q in zip(times, filtered.values)]))

    fit = separate_components(series, terms)  # starts from the closed-form eigenvalue
    record = fit.as_record()
    record.update(
        {
            "continuum_phase": phi_c,
            "phi_LO": phi_LO,
            "interference_period": interference_period(fit),
            "observable": OBSERVABLE,
        }
    )
    write_json(ctx, "homodyne_fit.json", record)
    message_id = fe.message(
        MsgType.OK,
        "Fitted E0 = {:.6g}, continuum phase {:.4f} rad (expected {:.4f})".format(fit.E0_fit, fit.phi_c, phi_c),
        "Component Fit",
    )
    fe.focus_metric(message_id, "fit_residual", fit.residual)
    fe.focus_metric(message_id, "phi_c", fit.phi_c)
