"""CSV / JSON-lines serialization of result records.

Floats are written with 12 significant digits, booleans as ``true``/``false``,
CSV rows end with LF. Output depends only on the record values, so
repeated runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from typing import IO, Iterable, Mapping

SIGNIFICANT_DIGITS = 12


def format_value(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        text = format(value, f".{SIGNIFICANT_DIGITS}g")
        return "0" if text == "-0" else text
    return str(value)


def parse_value(text: str):
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


def write_csv(records: Iterable[Mapping], stream: IO[str]) -> None:
    records = list(records)
    if not records:
        return
    writer = csv.writer(stream, lineterminator="\n")
    header = list(records[0].keys())
    writer.writerow(header)
    for rec in records:
        writer.writerow([format_value(rec[k]) for k in header])


def read_csv(stream: IO[str]) -> list[dict]:
    reader = csv.reader(stream)
    rows = list(reader)
    if not rows:
        return []
    header, body = rows[0], rows[1:]
    return [{k: parse_value(v) for k, v in zip(header, row)} for row in body]


def _json_value(value):
    if isinstance(value, float) and not isinstance(value, bool):
        return None if math.isnan(value) else float(format_value(value))
    return value


def write_json(records: Iterable[Mapping], stream: IO[str]) -> None:
    for rec in records:
        stream.write(json.dumps({k: _json_value(v) for k, v in rec.items()}) + "\n")


def read_json(stream: IO[str]) -> list[dict]:
    return [json.loads(line) for line in stream if line.strip()]


def dumps(records: Iterable[Mapping], fmt: str = "csv") -> str:
    buf = io.StringIO()
    (write_csv if fmt == "csv" else write_json)(records, buf)
    return buf.getvalue()
