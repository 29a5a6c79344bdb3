"""Table and state-file serialisation.

CSV files start with the schema line ``# hypersqueeze-schema v1`` followed
by optional ``# key=value`` metadata lines, a header and one row per record.
Floats are written with 17 significant digits so that reruns are
byte-identical and values round-trip exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from typing import IO, Iterable

import numpy as np

from .fock import FockBasis, StateVector

SCHEMA = "hypersqueeze-schema v1"
FORMATS = ("csv", "json")
STATE_COLUMNS = ("n_a", "n_b", "n_c", "n_d", "re", "im")


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    if v is None:
        return ""
    return str(v)


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else None
    if isinstance(v, (complex, np.complexfloating)):
        return [_jsonable(v.real), _jsonable(v.imag)]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    return v


def flatten_row(values: dict) -> dict:
    """Split complex entries into ``name.re`` / ``name.im`` columns."""
    out = {}
    for k, v in values.items():
        if isinstance(v, (complex, np.complexfloating)):
            out[f"{k}.re"] = float(v.real)
            out[f"{k}.im"] = float(v.imag)
        else:
            out[k] = v
    return out


def render_csv(rows: list[dict], meta: dict | None = None, columns: Iterable[str] | None = None) -> str:
    columns = list(columns) if columns is not None else _columns(rows)
    buf = io.StringIO()
    buf.write(f"# {SCHEMA}\n")
    for k, v in (meta or {}).items():
        buf.write(f"# {k}={format_value(v)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    return buf.getvalue()


def render_json(rows: list[dict], meta: dict | None = None, extra: dict | None = None) -> str:
    doc = {"schema": SCHEMA, "meta": _jsonable(meta or {}), "rows": _jsonable(rows)}
    if extra:
        doc.update(_jsonable(extra))
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _columns(rows: list[dict]) -> list[str]:
    seen = {}
    for row in rows:
        for k in row:
            seen.setdefault(k, None)
    return list(seen)


def write_text(text: str, path: str | Path | None, stream: IO[str] | None = None) -> None:
    if path is None:
        (stream or sys.stdout).write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def write_table(rows: list[dict], path: str | Path | None, fmt: str = "csv",
                meta: dict | None = None, extra: dict | None = None) -> None:
    if fmt == "csv":
        write_text(render_csv(rows, meta), path)
    elif fmt == "json":
        write_text(render_json(rows, meta, extra), path)
    else:
        raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")


def _parse_cell(text: str):
    if text == "":
        return None
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


def read_csv_table(path: str | Path) -> tuple[dict, list[dict]]:
    """Read a table written by ``render_csv``; returns ``(meta, rows)``."""
    meta, body = {}, []
    with open(path, encoding="utf-8") as fh:
        first = fh.readline().rstrip("\n")
        if first != f"# {SCHEMA}":
            raise ValueError(f"{path}: missing or unsupported schema line {first!r}")
        for line in fh:
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                meta[key] = _parse_cell(value)
            else:
                body.append(line)
    reader = csv.DictReader(body)
    rows = [{k: _parse_cell(v) for k, v in r.items()} for r in reader]
    return meta, rows


def state_rows(state: StateVector, threshold: float = 0.0) -> list[dict]:
    """Rows ``n_a..n_d, re, im`` for amplitudes with modulus above ``threshold``."""
    amps = state.amplitudes
    keep = np.flatnonzero(np.abs(amps) > threshold)
    occ = state.basis.occupations[keep]
    names = STATE_COLUMNS[: state.basis.mode_count]
    rows = []
    for idx, o in zip(keep, occ):
        row = {n: int(x) for n, x in zip(names, o)}
        row["re"] = float(amps[idx].real)
        row["im"] = float(amps[idx].imag)
        rows.append(row)
    return rows


def write_state_csv(state: StateVector, path: str | Path | None, meta: dict | None = None,
                    threshold: float = 0.0) -> None:
    columns = list(STATE_COLUMNS[: state.basis.mode_count]) + ["re", "im"]
    write_text(render_csv(state_rows(state, threshold), meta, columns), path)


def read_state_csv(path: str | Path, basis: FockBasis) -> StateVector:
    _, rows = read_csv_table(path)
    amps = np.zeros(basis.dim, dtype=complex)
    names = STATE_COLUMNS[: basis.mode_count]
    for r in rows:
        amps[basis.index([r[n] for n in names])] = complex(r["re"], r["im"])
    return StateVector(basis, amps)
