"""
CSV/JSON table artifacts.

CSV: ``# key=value`` metadata lines, one header row of column names, then
data rows. JSON: ``{"meta": {...}, "rows": [{...}, ...]}``. Floats are written
with 12 significant digits and LF line endings so identical inputs give
byte-identical files.
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path
from typing import Any, Iterable, Sequence

__all__ = ["format_value", "render_csv", "render_json", "render", "parse_table", "read_table"]


def format_value(v: Any) -> Any:
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return v
    if isinstance(v, complex):
        return f"{format_value(v.real)}{'+' if v.imag >= 0 else '-'}{format_value(abs(v.imag))}i"
    try:
        f = float(v)
    except (TypeError, ValueError):
        return str(v)
    if math.isnan(f):
        return "nan"
    if math.isinf(f):
        return "inf" if f > 0 else "-inf"
    return f"{f:.12g}"


def _cell(v: Any) -> str:
    out = format_value(v)
    return str(out).lower() if isinstance(out, bool) else str(out)


def render_csv(meta: dict[str, Any], columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    for key, value in meta.items():
        buf.write(f"# {key}={_cell(value)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _json_value(v: Any) -> Any:
    out = format_value(v)
    if isinstance(out, str):
        try:
            return float(out)
        except ValueError:
            return out
    return out


def render_json(meta: dict[str, Any], columns: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    doc = {
        "meta": {k: _json_value(v) for k, v in meta.items()},
        "rows": [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def render(fmt: str, meta, columns, rows) -> str:
    rows = list(rows)
    if fmt == "csv":
        return render_csv(meta, columns, rows)
    if fmt == "json":
        return render_json(meta, columns, rows)
    raise ValueError(f"unknown format {fmt!r}")


def _parse_scalar(s: str) -> Any:
    if s in ("true", "false"):
        return s == "true"
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def parse_table(text: str, fmt: str) -> tuple[dict[str, Any], list[dict[str, Any]]]:
    """Inverse of :func:`render`: returns (meta, rows) with numbers parsed."""
    if fmt == "json":
        doc = json.loads(text)
        return doc["meta"], doc["rows"]
    meta: dict[str, Any] = {}
    body = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = _parse_scalar(value)
        else:
            body.append(line)
    reader = csv.reader(body)
    header = next(reader)
    rows = [{c: _parse_scalar(v) for c, v in zip(header, r)} for r in reader]
    return meta, rows


def read_table(path: str | Path) -> tuple[dict[str, Any], list[dict[str, Any]]]:
    path = Path(path)
    fmt = "json" if path.suffix.lower() == ".json" else "csv"
    return parse_table(path.read_text(), fmt)
