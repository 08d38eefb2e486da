"""CSV and JSON output tables.

Both formats carry the same fields: a ``metadata`` mapping, a list of column
names and rows of numbers or strings. Floats are written with 17 significant
digits so files round-trip exactly and identical runs give identical bytes.

CSV layout::

    # schema_version: 1
    # mode: phase-spectrum
    # beta: 0.20000000000000001
    omega_over_gamma,phase_deg,reflectivity
    0,0,0.35999999999999999
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

from .config import SCHEMA_VERSION


@dataclass
class Table:
    mode: str
    columns: list
    rows: list
    metadata: dict = field(default_factory=dict)

    def column(self, name):
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return format(value, ".17g")
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def to_csv(table: Table) -> str:
    buf = io.StringIO()
    buf.write(f"# schema_version: {SCHEMA_VERSION}\n")
    buf.write(f"# mode: {table.mode}\n")
    for key, value in table.metadata.items():
        if isinstance(value, (list, tuple)):
            value = " ".join(format_value(v) for v in value)
        buf.write(f"# {key}: {format_value(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([format_value(v) for v in row])
    return buf.getvalue()


def to_json(table: Table) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "mode": table.mode,
        "metadata": _json_value(table.metadata),
        "columns": list(table.columns),
        "rows": [_json_value(list(row)) for row in table.rows],
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def render(table: Table, fmt: str) -> str:
    return to_json(table) if fmt == "json" else to_csv(table)


def _parse_cell(text):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        return text


def read_json(text: str) -> Table:
    doc = json.loads(text)
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema_version {doc.get('schema_version')!r}")
    expected = {"schema_version", "mode", "metadata", "columns", "rows"}
    if set(doc) != expected:
        raise ValueError(f"artifact keys {sorted(doc)} do not match schema {sorted(expected)}")
    rows = [[math.nan if v is None else v for v in row] for row in doc["rows"]]
    if any(len(row) != len(doc["columns"]) for row in rows):
        raise ValueError("row length does not match the column list")
    return Table(doc["mode"], doc["columns"], rows, doc["metadata"])


def read_csv(text: str) -> Table:
    meta, body = {}, []
    for line in text.splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(":")
            meta[key.strip()] = value.strip()
        else:
            body.append(line)
    if meta.pop("schema_version", None) != str(SCHEMA_VERSION):
        raise ValueError("missing or unsupported schema_version comment")
    mode = meta.pop("mode", "")
    reader = csv.reader(body)
    columns = next(reader)
    rows = [[_parse_cell(c) for c in row] for row in reader]
    return Table(mode, columns, rows, meta)
