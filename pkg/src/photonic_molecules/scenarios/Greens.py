import numpy as np

from ..fields import Grid1D
from ..Frontend import MsgType
from ..greens import freq_quantities, green_norm_scan, locate_poles, synthesize_ee
from ..spectral import ground_energy_law
from ..TableBuilder import ProfileTableBuilder, RecordTableBuilder, write_json, write_table
from .ScenarioSupport import optional

requested_parameters = [
    optional("numerics.grid_length", 40.0),
    optional("numerics.grid_points", 512),
    optional("numerics.omega_min"),  # 0.1 |E0| when unset
    optional("numerics.omega_max"),  # 3 |E0| when unset
    optional("numerics.omega_points", 61),
    optional("numerics.t_max", 20.0),
    optional("numerics.synthesis_points", 512),
    optional("numerics.prefactor", "cos4"),
]


def get_identifier():
    return "greens"


def get_name():
    return "Frequency-Domain Green's Function"


def get_description():
    return "Coefficient functions, resolvent norm scan and frequency synthesis of the pair amplitude"


def get_parent_rules_identifiers():
    return ["derive"]


def apply(ctx):
    fe = ctx.frontend
    p, scales = (fe.receive_dict_from_parent("derive")[key] for key in ("params", "scales"))
    grid = Grid1D.symmetric(float(ctx.parameters["grid_length"]), int(ctx.parameters["grid_points"]))

    static = freq_quantities(0.0, 0.0, p)
    write_json(
        ctx,
        "freq_quantities.json",
        {
            "alpha11": static.alpha11,
            "alpha00": static.alpha00,
            "gamma_factor": static.gamma_factor,
            "m0": static.m0,
            "Lambda0": static.Lambda0,
            "m": scales.m,
            "alpha": scales.alpha,
        },
    )

    # the bound pole of G sits near -Re E0 for Delta < 0
    scale = abs(ground_energy_law(scales.xi))
    omega_min = ctx.parameters["omega_min"]
    omega_max = ctx.parameters["omega_max"]
    omega_min = 0.1 * scale if omega_min is None else float(omega_min)
    omega_max = 3.0 * scale if omega_max is None else float(omega_max)
    omegas = np.linspace(omega_min, omega_max, int(ctx.parameters["omega_points"]))
    norms = green_norm_scan(omegas, grid, p)
    write_table(ctx, "green_scan.csv", RecordTableBuilder([{"omega": w, "norm": n} for w, n in zip(omegas, norms)]))
    poles = locate_poles(omegas, norms)

    t = float(ctx.parameters["t_max"])
    flat = np.ones(grid.n_points, dtype=complex)
    ee = synthesize_ee(flat, [t], grid, p, int(ctx.parameters["synthesis_points"]), ctx.parameters["prefactor"])
    write_table(ctx, "ee_synthesized.csv", ProfileTableBuilder(grid.points(), {"EE": ee[0]}))

    message_id = fe.message(
        MsgType.OK, "{} resolvent peak(s) between omega = {:.4g} and {:.4g}".format(len(poles), omega_min, omega_max), "Resolvent"
    )
    fe.focus_metric(message_id, "poles", [float(w) for w in poles])
    fe.focus_metric(message_id, "ee_origin_synthesized", complex(ee[0][grid.origin_index]))
