"""Deterministic JSON/CSV writers shared by the spectrum module and the CLI.

Floats are rendered with %.17g (lossless for IEEE doubles and byte-stable
across runs), keys are emitted in sorted order, and CSV headers are
'#'-prefixed comment lines, so repeated runs with the same inputs produce
byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path


def format_float(x: float) -> str:
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        raise ValueError("non-finite float in serialized output")
    return format(float(x), ".17g")


def _json_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "null"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format_float(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, dict):
        items = sorted(v.items())
        return "{" + ", ".join(f'{_json_value(k)}: {_json_value(val)}' for k, val in items) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps_json(obj: dict) -> str:
    return _json_value(obj) + "\n"


def write_json(path, obj: dict) -> None:
    Path(path).write_text(dumps_json(obj), encoding="utf-8")


def write_csv(path, header_lines: list[str], column_names: list[str], rows) -> None:
    """CSV with '#'-prefixed header lines, a column-name line, and data rows."""
    lines = [f"# {h}" for h in header_lines]
    lines.append(",".join(column_names))
    for row in rows:
        lines.append(",".join(format_float(x) if isinstance(x, float) else str(x) for x in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path) -> tuple[list[str], list[str], list[list[float]]]:
    """Inverse of :func:`write_csv`; all data cells are parsed as floats."""
    headers: list[str] = []
    names: list[str] = []
    rows: list[list[float]] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            headers.append(line[1:].strip())
        elif not names:
            names = [c.strip() for c in line.split(",")]
        else:
            rows.append([float(c) for c in line.split(",")])
    return headers, names, rows
