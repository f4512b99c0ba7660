import csv
import json

import numpy as np
import pytest

from photonic_molecules.Frontend import Frontend, ScenarioContext
from photonic_molecules.TableBuilder import (
    ComplexSeriesTableBuilder,
    MapTableBuilder,
    ProfileTableBuilder,
    RecordTableBuilder,
    format_cell,
    to_json_ready,
    write_json,
    write_table,
)


def test_format_cell():
    assert format_cell(True) == "true"
    assert format_cell(np.int64(3)) == "3"
    assert format_cell(0.1) == "0.1"
    assert format_cell(np.float64(1e-20)) == "1e-20"
    assert format_cell("ok") == "ok"
    with pytest.raises(TypeError):
        format_cell(1j)


def test_to_json_ready():
    record = to_json_ready({"E0": -0.04 - 0.01j, "n": np.int32(2), "r": np.array([1.0, np.inf]), "ok": np.bool_(True)})
    assert record == {"Re_E0": -0.04, "Im_E0": -0.01, "n": 2, "r": [1.0, "inf"], "ok": True}
    assert to_json_ready([1j]) == [[0.0, 1.0]]


def test_complex_series_columns():
    header, data, config = ComplexSeriesTableBuilder("t", [1.0, 2.0], {"total": [1j, 2.0]}, with_polar=True).build()
    assert header == ["t", "Re_total", "Im_total", "abs_total", "arg_total"]
    assert data[0][:4] == [1.0, 0.0, 1.0, 1.0]
    assert config == {"axis": "t"}
    with pytest.raises(ValueError):
        ComplexSeriesTableBuilder("t", [1.0, 2.0], {"total": [1j]}).build()


def test_profile_extra_columns():
    header, data, _ = ProfileTableBuilder([0.0, 1.0], {"psi": [1.0, 0.5j]}, {"W": [2.0, 1.0]}).build()
    assert header == ["r", "Re_psi", "Im_psi", "W"]
    assert data[1] == [1.0, 0.0, 0.5, 1.0]


def test_map_stride():
    values = np.arange(16, dtype=complex).reshape(4, 4)
    header, data, config = MapTableBuilder(range(4), range(4), values, stride=2).build()
    assert header == ["z1", "z2", "abs2_EE", "arg_EE"]
    assert config == {"shape": [2, 2]}
    assert [row[2] for row in data] == [0.0, 4.0, 64.0, 100.0]


def test_write_table_and_json(tmp_path):
    ctx = ScenarioContext({}, tmp_path, Frontend())
    builder = RecordTableBuilder([{"xi": 0.2, "ok": True}, {"xi": 0.4}], ["xi", "ok"])
    write_table(ctx, "scan/xi.csv", builder, message_id=0)
    write_json(ctx, "terms.json", {"eta": 2.0 + 0.1j})
    with (tmp_path / "scan" / "xi.csv").open(newline="") as handle:
        rows = list(csv.reader(handle))
    assert rows == [["xi", "ok"], ["0.2", "true"], ["0.4", ""]]
    assert json.loads((tmp_path / "terms.json").read_text()) == {"Re_eta": 2.0, "Im_eta": 0.1}
    assert ctx.files == ["scan/xi.csv", "terms.json"]
    assert ctx.frontend.tables[0].name == "scan/xi.csv"
