"""JSON and tidy-CSV emission with deterministic names and round-trip floats."""
from __future__ import annotations

import csv
import io
import json
import math
import re
from pathlib import Path

import numpy as np


def _clean(obj):
    """Make ``obj`` strict-JSON safe: non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        if math.isfinite(f):
            return f
        return "nan" if math.isnan(f) else ("inf" if f > 0 else "-inf")
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    if v is None:
        return ""
    return str(v)


def dumps_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _slug(v) -> str:
    if isinstance(v, float):
        v = repr(v)
    return re.sub(r"[^A-Za-z0-9.+-]+", "-", str(v)).strip("-")


def report_name(command: str, params: dict, ext: str, stem: str = "") -> str:
    """File name determined by the command and its parameters alone."""
    parts = [command] + ([_slug(stem)] if stem else [])
    parts += [f"{k}-{_slug(params[k])}" for k in sorted(params) if params[k] is not None]
    return "__".join(parts) + "." + ext


def write_text(path: Path, text: str) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return path


def emit_plot_data(out_dir, name: str, header, rows) -> Path:
    """Write one tidy CSV file (header line, one observation per row)."""
    return write_text(Path(out_dir) / name, dumps_csv(header, rows))


def emit_json(out_dir, name: str, obj) -> Path:
    return write_text(Path(out_dir) / name, dumps_json(obj))
