import numpy as np

from ..analytic import closed_form_terms, ee_closed_form
from ..dynamics import ee_in_cos4_units, evolve_relative
from ..Frontend import MsgType
from ..TableBuilder import ProfileTableBuilder, write_table
from .ScenarioSupport import GRID_REQUESTS, TIME_REQUESTS, grid_from_parameters, run_config

requested_parameters = [*GRID_REQUESTS, *TIME_REQUESTS]


def get_identifier():
    return "amplitude-comparison"


def get_name():
    return "Model Comparison"


def get_description():
    return "Numerical pair amplitude against the bound and continuum parts of the contact-interaction solution"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p, scales = (fe.receive_dict_from_parent("derive")[key] for key in ("params", "scales"))
    grid = grid_from_parameters(ctx.parameters, scales.xi)
    cfg = run_config(ctx.parameters, grid, initial_profile="dark")
    final = evolve_relative(cfg, p).final
    r = grid.points()
    numeric = ee_in_cos4_units(final, scales)
    split = ee_closed_form(r, final.time, closed_form_terms(scales))

    gap = float(np.max(np.abs(np.abs(numeric) - np.abs(split.total))) / np.max(np.abs(numeric)))
    message_id = fe.message(
        MsgType.OK if gap <= 0.1 else MsgType.WARNING,
        "Largest gap between |EE| and the contact solution at t = {:g}: {:.3%} of the peak".format(final.time, gap),
        "Model Comparison",
    )
    fe.focus_metric(message_id, "max_gap_over_peak", gap)

    profiles = {
        "ee_numeric.csv": numeric,
        "ee_analytic_bound.csv": split.bound,
        "ee_analytic_cont.csv": split.continuum,
        "ee_analytic_sum.csv": split.total,  # bound + continuum
    }
    for filename, values in profiles.items():
        write_table(ctx, filename, ProfileTableBuilder(r, {"EE": values}), message_id)
