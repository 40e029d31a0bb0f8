"""
CSV / JSON emission of command reports.

A report is a small record: ``command``, a flat ``params`` mapping (inputs and
derived scalars), a nested ``results`` mapping and optionally a table
(``columns`` + ``rows``). Both encoders are deterministic: keys keep insertion
order, floats are written so that they parse back to the same double, and no
timestamps or host data are included.

CSV layout::

    # key=value          (params, then results flattened with dotted keys)
    col1,col2,...        (header; "key,value" when the report has no table)
    ...                  (rows, floats in 17 significant digits)

JSON layout: one object with keys command, params, results[, columns, rows];
non-finite floats become null.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np


@dataclass
class Report:
    command: str
    params: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    columns: Optional[List[str]] = None
    rows: Optional[np.ndarray] = None


def format_value(value: Any) -> str:
    """Text form used in CSV cells and metadata lines."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ";".join(format_value(v) for v in value) + "]"
    return str(value)


def flatten(mapping: Dict[str, Any], prefix: str = "") -> Dict[str, Any]:
    out: Dict[str, Any] = {}
    for key, value in mapping.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(flatten(value, name + "."))
        else:
            out[name] = value
    return out


def to_csv(report: Report) -> str:
    buf = io.StringIO()
    for key, value in report.params.items():
        buf.write(f"# {key}={format_value(value)}\n")
    results = flatten(report.results)
    writer = csv.writer(buf, lineterminator="\n")
    if report.columns is None:
        writer.writerow(["key", "value"])
        for key, value in results.items():
            writer.writerow([key, format_value(value)])
        return buf.getvalue()
    for key, value in results.items():
        buf.write(f"# {key}={format_value(value)}\n")
    writer.writerow(report.columns)
    for row in np.asarray(report.rows, dtype=float):
        writer.writerow([format_value(x) for x in row])
    return buf.getvalue()


def _jsonable(value: Any) -> Any:
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        return x if math.isfinite(x) else None
    return value


def to_json(report: Report) -> str:
    obj: Dict[str, Any] = {
        "command": report.command,
        "params": report.params,
        "results": report.results,
    }
    if report.columns is not None:
        obj["columns"] = list(report.columns)
        obj["rows"] = np.asarray(report.rows, dtype=float)
    return json.dumps(_jsonable(obj), indent=2, allow_nan=False) + "\n"


def encode(report: Report, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(report)
    if fmt == "json":
        return to_json(report)
    raise ValueError(f"unknown format {fmt!r}")


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        raise FileNotFoundError(f"output directory {directory!r} does not exist")
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_csv_table(text: str):
    """Parse a CSV report back into (metadata dict, header, rows of str)."""
    meta: Dict[str, str] = {}
    body: List[str] = []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            meta[key] = value
        else:
            body.append(line)
    rows = list(csv.reader(body))
    return meta, rows[0], rows[1:]


def parse_float(text: str) -> float:
    return float("nan") if text in ("", "nan") else float(text)


def sequence_equal(a: Sequence[float], b: Sequence[float]) -> bool:
    """Elementwise equality treating NaN (or None) as equal to itself."""
    if len(a) != len(b):
        return False
    for x, y in zip(a, b):
        x = float("nan") if x is None else float(x)
        y = float("nan") if y is None else float(y)
        if not (x == y or (math.isnan(x) and math.isnan(y))):
            return False
    return True
