"""Message, focus-value and table sink shared by the scenario rules.

Scenarios never print. They report through a :class:`Frontend`, which keeps
everything it is told for the run manifest and mirrors it to ``logging``.
"""

import enum
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import ScenarioError

logger = logging.getLogger(__name__)


class MsgType(enum.IntEnum):
    """Message severity.

    NONE - no classification
    OK - the scenario produced its result
    OPTIMIZATION - numerical-quality advice (coarse grid, short window)
    WARNING - the result is usable but a check failed
    ERROR - the scenario could not produce its result
    """

    NONE = 0
    OK = 1
    OPTIMIZATION = 2
    WARNING = 3
    ERROR = 4


_LOG_LEVELS = {
    MsgType.NONE: logging.DEBUG,
    MsgType.OK: logging.INFO,
    MsgType.OPTIMIZATION: logging.INFO,
    MsgType.WARNING: logging.WARNING,
    MsgType.ERROR: logging.ERROR,
}


@dataclass
class Message:
    id: int
    type: MsgType
    text: str
    title: str = ""


@dataclass
class FocusValue:
    message_id: int
    name: str
    value: Any
    note: str = ""


@dataclass
class Table:
    message_id: int
    name: str
    header: list[str]
    rows: list[list[Any]]
    config: dict[str, Any] | None = None


class Frontend:
    """Collects what a scenario reports.

    Results computed by a parent scenario are handed to its children with
    `send_dict_to_children` / `receive_dict_from_parent`, keyed by the
    parent's identifier.
    """

    def __init__(self, identifier="derive"):
        self.identifier = identifier
        self.messages: list[Message] = []
        self.focus_values: list[FocusValue] = []
        self.tables: list[Table] = []
        self._shared: dict[str, dict] = {}

    def message(self, type_or_text, text=None, title=""):
        """Post a message and return its id.

        Can be called as ``message(text)`` (type NONE) or ``message(type, text, title)``.
        """
        if text is None:
            msg_type, text = MsgType.NONE, str(type_or_text)
        else:
            msg_type = MsgType(type_or_text)
        message_id = len(self.messages)
        self.messages.append(Message(message_id, msg_type, text, title))
        logger.log(_LOG_LEVELS[msg_type], "[%s] %s%s", self.identifier, "{}: ".format(title) if title else "", text)
        return message_id

    def focus_metric(self, message_id, name, value, note=""):
        """Attach a headline value to a message; focus values end up in the manifest."""
        self.focus_values.append(FocusValue(message_id, name, value, note))
        logger.debug("[%s] focus %s = %r", self.identifier, name, value)

    def generate_table(self, message_id, name, header, rows, config=None):
        self.tables.append(Table(message_id, name, list(header), rows, config))

    def send_dict_to_children(self, values: dict):
        self._shared[self.identifier] = dict(values)

    def receive_dict_from_parent(self, parent_id) -> dict:
        try:
            return self._shared[parent_id]
        except KeyError:
            raise ScenarioError("Parent scenario {} has not run.".format(parent_id)) from None

    def for_child(self, identifier):
        """A frontend for a child scenario that shares messages and parent results."""
        child = Frontend(identifier)
        child.messages = self.messages
        child.focus_values = self.focus_values
        child.tables = self.tables
        child._shared = self._shared
        return child

    def raise_exception(self, text):
        self.message(MsgType.ERROR, text)
        raise ScenarioError(text)

    def focus_record(self) -> dict:
        return {focus.name: focus.value for focus in self.focus_values}

    def message_records(self) -> list[dict]:
        return [
            {"id": m.id, "type": m.type.name, "text": m.text, "title": m.title} for m in self.messages
        ]

    def table_records(self) -> list[dict]:
        """Tables attached to a message, without their rows (those live in the CSV files)."""
        return [
            {"message_id": t.message_id, "name": t.name, "header": t.header, "config": t.config} for t in self.tables
        ]


@dataclass
class ScenarioContext:
    """Everything a scenario rule needs to run.

    Attributes:
        config: The validated, override-applied configuration.
        output_dir: Directory receiving every file of the run.
        frontend: Message sink of the running scenario.
        parameters: Parsed `RequestedParameterDict` of the running scenario.
        files: Names of the files written so far, relative to output_dir.
    """

    config: dict
    output_dir: Path
    frontend: Frontend
    parameters: Any = None
    files: list[str] = field(default_factory=list)

    def register_file(self, filename) -> Path:
        path = self.output_dir / filename
        name = str(Path(filename).as_posix())
        if name not in self.files:
            self.files.append(name)
        return path

    def numerics(self, name, default=None):
        return self.config.get("numerics", {}).get(name, default)
