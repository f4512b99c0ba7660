import csv
import json
import math
from abc import ABC, abstractmethod
from collections.abc import Mapping, Sequence
from typing import Any

import numpy as np

from .Frontend import ScenarioContext


class TableBuilder(ABC):
    """Interface to construct the CSV tables written by scenarios."""

    @abstractmethod
    def build(self) -> tuple[list[str], list[list[Any]], dict[str, Any] | None]:
        """Build the table.

        Returns:
            Header, data and (optional) configuration for the table.
        """
        pass


def _split_complex(name: str, values) -> dict[str, np.ndarray]:
    values = np.asarray(values)
    return {"Re_" + name: values.real, "Im_" + name: values.imag}


class ComplexSeriesTableBuilder(TableBuilder):
    """Build a table of complex series sampled on a common real axis.

    Example Table:

    | t   | Re_total | Im_total | Re_bound | Im_bound | ... |
    | --- | -------- | -------- | -------- | -------- | --- |
    | 0.5 | 0.91     | -0.12    | 1.83     | -0.02    | ... |

    Args:
        axis_name: Name of the real axis column, e.g. "t" or "r".
        axis: The axis values.
        series: Ordered mapping of series name to complex values.
        with_polar: Also emit abs_<name> and arg_<name> columns.
    """

    def __init__(self, axis_name: str, axis, series: Mapping[str, Any], with_polar: bool = False) -> None:
        self.axis_name = axis_name
        self.axis = np.asarray(axis, dtype=float)
        self.series = series
        self.with_polar = with_polar

    def build(self) -> tuple[list[str], list[list[Any]], dict[str, Any]]:
        columns = {self.axis_name: self.axis}
        for name, values in self.series.items():
            values = np.asarray(values, dtype=complex)
            if values.shape != self.axis.shape:
                raise ValueError("Series {} does not match the {} axis.".format(name, self.axis_name))
            columns.update(_split_complex(name, values))
            if self.with_polar:
                columns["abs_" + name] = np.abs(values)
                columns["arg_" + name] = np.angle(values)
        header = list(columns)
        data = [list(row) for row in zip(*columns.values())]
        return header, data, {"axis": self.axis_name}


class ProfileTableBuilder(ComplexSeriesTableBuilder):
    """Build a table of complex spatial profiles, one Re_/Im_ pair per component.

    Args:
        r: Grid points (R_B units).
        components: Ordered mapping of component name to complex profile.
    """

    def __init__(self, r, components: Mapping[str, Any], extra: Mapping[str, Any] | None = None) -> None:
        super().__init__("r", r, components)
        self.extra = extra or {}

    def build(self):
        header, data, config = super().build()
        for name, values in self.extra.items():
            values = np.asarray(values, dtype=float)
            header.append(name)
            for row, value in zip(data, values):
                row.append(value)
        return header, data, config


class SpectrumTableBuilder(TableBuilder):
    """Build one row per eigenstate of one or more spectra.

    | xi  | n | Re_E    | Im_E     | localization | is_bound | in_window |
    | --- | - | ------- | -------- | ------------ | -------- | --------- |
    | 0.2 | 0 | -0.0441 | -0.00012 | 0.9999       | True     | True      |

    Args:
        spectra: SpectrumResult objects.
        bound_only: Only emit states classified as bound.
    """

    header = ["xi", "n", "Re_E", "Im_E", "localization", "is_bound", "in_window"]

    def __init__(self, spectra: Sequence, bound_only: bool = False) -> None:
        self.spectra = spectra
        self.bound_only = bound_only

    def build(self):
        data = []
        for spectrum in self.spectra:
            for n, state in enumerate(spectrum.states):
                if self.bound_only and not state.is_bound:
                    continue
                data.append(
                    [
                        spectrum.xi,
                        n,
                        state.energy.real,
                        state.energy.imag,
                        state.localization,
                        state.is_bound,
                        abs(state.energy) < spectrum.literal_window,
                    ]
                )
        return list(self.header), data, {"sort_by": {"column": "Re_E", "order": "ascending"}}


class MapTableBuilder(TableBuilder):
    """Build a long-format table of a complex 2-D map (z1, z2, |EE|^2, arg EE).

    Args:
        z1, z2: Axes of the map.
        values: Complex array of shape (len(z1), len(z2)).
        stride: Keep every stride-th point along each axis.
    """

    def __init__(self, z1, z2, values, stride: int = 1, names=("z1", "z2")) -> None:
        self.z1 = np.asarray(z1, dtype=float)
        self.z2 = np.asarray(z2, dtype=float)
        self.values = np.asarray(values, dtype=complex)
        self.stride = max(int(stride), 1)
        self.names = names

    def build(self):
        s = self.stride
        z1 = self.z1[::s]
        z2 = self.z2[::s]
        values = self.values[::s, ::s]
        Z1, Z2 = np.meshgrid(z1, z2, indexing="ij")
        header = [self.names[0], self.names[1], "abs2_EE", "arg_EE"]
        data = [
            list(row)
            for row in zip(Z1.ravel(), Z2.ravel(), (np.abs(values) ** 2).ravel(), np.angle(values).ravel())
        ]
        return header, data, {"shape": [len(z1), len(z2)]}


class RecordTableBuilder(TableBuilder):
    """Build a table with one row per record and a fixed column order.

    Columns default to the keys of the first record; missing values become "".
    """

    def __init__(self, records: Sequence[Mapping[str, Any]], columns: Sequence[str] | None = None) -> None:
        self.records = records
        self.columns = list(columns) if columns is not None else (list(records[0]) if records else [])

    def build(self):
        data = [[record.get(column, "") for column in self.columns] for record in self.records]
        return list(self.columns), data, None


def format_cell(value) -> str:
    """Shortest round-tripping text for a cell value."""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (complex, np.complexfloating)):
        raise TypeError("Complex values must be split into Re_/Im_ columns.")
    return str(value)


def write_table(ctx: ScenarioContext, filename: str, builder: TableBuilder, message_id=None):
    """Write the builder's table as CSV into the run directory and register it."""
    header, data, config = builder.build()
    path = ctx.register_file(filename)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in data:
            writer.writerow([format_cell(value) for value in row])
    if message_id is not None:
        ctx.frontend.generate_table(message_id, filename, header, [], config)
    return path


def to_json_ready(value):
    """Recursively convert numpy scalars and complex numbers; complex keys get Re_/Im_ prefixes."""
    if isinstance(value, Mapping):
        record = {}
        for key, item in value.items():
            if isinstance(item, (complex, np.complexfloating)):
                record["Re_" + str(key)] = float(item.real)
                record["Im_" + str(key)] = float(item.imag)
            else:
                record[str(key)] = to_json_ready(item)
        return record
    if isinstance(value, (list, tuple)):
        return [to_json_ready(item) for item in value]
    if isinstance(value, np.ndarray):
        return to_json_ready(value.tolist())
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else repr(value)
    return value


def write_json(ctx: ScenarioContext, filename: str, record: Mapping):
    path = ctx.register_file(filename)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(to_json_ready(record), sort_keys=True, indent=2) + "\n", encoding="utf-8")
    return path
