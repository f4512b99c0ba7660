import logging
from pathlib import Path

import pytest

from photonic_molecules.errors import ScenarioError
from photonic_molecules.Frontend import Frontend, MsgType, ScenarioContext


def test_messages_and_focus_values(caplog):
    fe = Frontend("spectrum")
    with caplog.at_level(logging.INFO, logger="photonic_molecules"):
        first = fe.message("computed")
        second = fe.message(MsgType.WARNING, "coarse grid", "Grid")
    assert (first, second) == (0, 1)
    fe.focus_metric(second, "n_bound", 1)
    assert fe.focus_record() == {"n_bound": 1}
    assert fe.message_records()[1] == {"id": 1, "type": "WARNING", "text": "coarse grid", "title": "Grid"}
    assert any("[spectrum] Grid: coarse grid" in record.getMessage() for record in caplog.records)


def test_children_share_reports_and_parent_results():
    root = Frontend()
    root.send_dict_to_children({"xi": 0.2})
    child = root.for_child("ground-energy")
    child.message(MsgType.OK, "done")
    assert child.receive_dict_from_parent("derive") == {"xi": 0.2}
    assert [m.text for m in root.messages] == ["done"]


def test_missing_parent_raises():
    with pytest.raises(ScenarioError):
        Frontend("potential-profile").receive_dict_from_parent("derive")


def test_raise_exception_posts_an_error():
    fe = Frontend()
    with pytest.raises(ScenarioError):
        fe.raise_exception("no bound state")
    assert fe.messages[-1].type == MsgType.ERROR


def test_context_registers_files_once(tmp_path):
    ctx = ScenarioContext({"numerics": {"dt": 0.01}}, tmp_path, Frontend())
    assert ctx.register_file("spectrum.csv") == tmp_path / "spectrum.csv"
    ctx.register_file(Path("spectrum.csv"))
    assert ctx.files == ["spectrum.csv"]
    assert ctx.numerics("dt") == 0.01
    assert ctx.numerics("n_points", 1024) == 1024


def test_table_records_follow_their_message():
    fe = Frontend("amplitude-comparison")
    message_id = fe.message(MsgType.OK, "compared")
    fe.for_child("phase-map").generate_table(message_id, "ee_numeric.csv", ("r", "Re_EE"), [[0.0, 1.0]], {"units": "R_B"})
    assert fe.table_records() == [
        {"message_id": 0, "name": "ee_numeric.csv", "header": ["r", "Re_EE"], "config": {"units": "R_B"}}
    ]
