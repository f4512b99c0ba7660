import json

import pytest

from photonic_molecules.errors import IncompleteConfigurationError, InvalidParameterError
from photonic_molecules.Frontend import Frontend
from photonic_molecules.RequestedParameters import UnknownParameterError
from photonic_molecules.scenarios import REGISTRY, RULES, execute, resolve_config, scenario_names
from photonic_molecules.scenarios.ScenarioSupport import grid_from_parameters, medium_from_config

REDUCED = {"xi": 0.2, "Delta_over_gamma": -12.0, "g_over_Omega": 100.0}


def _run(config, tmp_path):
    frontend = Frontend()
    files = []
    execute(resolve_config(config), tmp_path, frontend, files)
    return frontend, files


def test_registry():
    assert {"derive", "spectrum", "evolve-rel", "evolve-2d", "analytic", "greens", "homodyne"} <= set(scenario_names())
    assert {"potential-profile", "ground-energy", "phase-map"} <= set(scenario_names()[7:])
    for scenario in REGISTRY.values():
        assert scenario.module.get_description()
        for parent in scenario.module.get_parent_rules_identifiers():
            assert parent in RULES


def test_fixed_values_override_the_user():
    resolved = resolve_config({"scenario": "potential-profile", "params": {**REDUCED, "xi": 0.5}})
    assert resolved["params"]["xi"] == 1.0
    assert resolved["params"]["Delta_over_gamma"] == -8.0


def test_defaults_only_fill_missing_keys():
    base = {"scenario": "molecule-components", "params": {"xi": 0.2, "g_over_Omega": 20.0}}
    assert resolve_config(base)["params"]["Delta_over_gamma"] == -4.0
    base["params"]["Delta_over_gamma"] = -8.0
    assert resolve_config(base)["params"]["Delta_over_gamma"] == -8.0


def test_resolve_rejects_bad_configs():
    with pytest.raises(UnknownParameterError):
        resolve_config({"scenario": "derive", "params": REDUCED, "numerics": {"n_pts": 10}})
    with pytest.raises(InvalidParameterError):
        resolve_config({"scenario": "pair-map-medium", "params": REDUCED})


def test_medium_from_config():
    assert medium_from_config(REDUCED).requested["xi"] == 0.2
    physical = medium_from_config({"g": 1.0, "Omega": 1.0, "gamma": 1.0, "Delta": -8.0, "c": 1.0, "C6": 1.0})
    assert physical.Delta == -8.0
    with pytest.raises(InvalidParameterError):
        medium_from_config({**REDUCED, "g": 1.0})
    with pytest.raises(InvalidParameterError):
        medium_from_config({**REDUCED, "mode": "natural"})
    with pytest.raises(IncompleteConfigurationError):
        medium_from_config({"xi": 0.2, "g_over_Omega": 100.0})
    with pytest.raises(IncompleteConfigurationError):
        medium_from_config({"mode": "physical", "g": 1.0})


def test_grid_needs_both_keys():
    with pytest.raises(IncompleteConfigurationError):
        grid_from_parameters({"numerics.grid_length": 100.0, "numerics.grid_points": None}, 0.2)
    grid = grid_from_parameters({"numerics.grid_length": 100.0, "numerics.grid_points": 256}, 0.2)
    assert (grid.length, grid.n_points) == (100.0, 256)


def test_derive(tmp_path):
    frontend, files = _run({"scenario": "derive", "params": REDUCED}, tmp_path)
    record = json.loads((tmp_path / "derived_scales.json").read_text())
    assert files == ["derived_scales.json"]
    assert record["xi"] == pytest.approx(0.2)
    assert record["bound_state_exists"] is True
    assert "dimensionality_ratio" not in record
    assert frontend.focus_record()["xi"] == pytest.approx(0.2)


def test_derive_checks_dimensionality(tmp_path):
    frontend, _ = _run({"scenario": "derive", "params": {**REDUCED, "lambda_p": 1e-3, "w": 1e-3}}, tmp_path)
    record = json.loads((tmp_path / "derived_scales.json").read_text())
    assert "valid_1d" in record


def test_analytic(tmp_path):
    frontend, files = _run({"scenario": "analytic", "params": REDUCED, "numerics": {"r_points": 11}}, tmp_path)
    assert files == ["derived_scales.json", "ee_analytic.csv", "analytic_terms.json"]
    rows = (tmp_path / "ee_analytic.csv").read_text().splitlines()
    assert len(rows) == 12
    assert rows[0].startswith("r,Re_total,Im_total,abs_total,arg_total")
    assert frontend.focus_record()["gamma_b"] > 0


def test_analytic_needs_negative_detuning(tmp_path):
    with pytest.raises(InvalidParameterError):
        _run({"scenario": "analytic", "params": {**REDUCED, "Delta_over_gamma": 12.0}}, tmp_path)


def test_potential_profile(tmp_path):
    frontend, files = _run({"scenario": "potential-profile", "params": REDUCED}, tmp_path)
    assert "potential.csv" in files
    assert frontend.focus_record()["resonance_radius"] == pytest.approx(1.0, abs=0.01)


def test_figure_identifiers_share_their_scenario():
    assert REGISTRY["figure:5"] is REGISTRY["amplitude-comparison"]
    assert REGISTRY["figure:1d"] is REGISTRY["pair-map-strong"]
    assert resolve_config({"scenario": "figure:2", "params": REDUCED})["params"]["xi"] == 1.0
    assert {"figure:1c", "figure:4a", "figure:4b", "figure:6", "figure:7", "figure:8", "figure:9"} <= set(scenario_names())
