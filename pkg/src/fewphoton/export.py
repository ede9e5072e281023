"""CSV / JSON serialisation with a fixed number format (15 significant digits)."""
from __future__ import annotations

import csv
import io
import json
import math
from typing import Iterable, Sequence

import numpy as np


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if x == 0:
        return "0"  # no negative zero
    text = f"{x:.15g}"
    # rounding the largest doubles up to 15 digits overflows
    return text if math.isfinite(float(text)) or not math.isfinite(x) else repr(x)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if not math.isfinite(x):
            return None
        return 0.0 if x == 0 else float(fmt(x))
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    return value


def csv_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def json_text(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    records = [{k: _json_value(v) for k, v in zip(header, row)} for row in rows]
    return json.dumps(records, indent=1) + "\n"


def table_text(header: Sequence[str], rows: Iterable[Sequence], fmt_name: str = "csv") -> str:
    rows = list(rows)
    if fmt_name == "csv":
        return csv_text(header, rows)
    if fmt_name == "json":
        return json_text(header, rows)
    raise ValueError(f"unknown format {fmt_name!r}")


def metadata_text(meta: dict) -> str:
    return json.dumps(_json_value(meta), indent=2, sort_keys=True) + "\n"


def profile_rows(profile):
    amp = np.asarray(profile.amplitude)
    for t, a in zip(profile.tau_grid, amp):
        yield (t, a.real, a.imag, abs(a))


PROFILE_HEADER = ("tau", "re_amp", "im_amp", "abs_amp")
CORRELATION_HEADER = ("tau", "g2")
