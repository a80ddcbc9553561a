"""CSV emission and the matching reader.

Every table starts with ``#`` comment lines (schema tag, then an echo of the
configuration), followed by a mandatory header row.  Floats are written with
``repr`` so they round-trip exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

SCHEMA_VERSION = 1


def format_value(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    try:
        return repr(float(v))
    except (TypeError, ValueError):
        return str(v)


def write_table(stream, schema: str, columns, rows, config=None, trailer=()):
    """Write one table.  ``trailer`` lines are appended as ``#`` comments."""
    stream.write(f"# dqwalk schema={schema}/{SCHEMA_VERSION}\n")
    if config is not None:
        stream.write("# config: " + json.dumps(config, sort_keys=True, separators=(",", ":")) + "\n")
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(c)) for c in columns])
    for line in trailer:
        stream.write(f"# {line}\n")


def _parse(cell: str):
    if cell == "":
        return None
    try:
        return int(cell)
    except ValueError:
        pass
    try:
        return float(cell)
    except ValueError:
        return cell


def read_table(source):
    """Parse a table written by :func:`write_table`.

    ``source`` is a string or a text stream.  Returns
    ``(comments, columns, rows)`` with ``rows`` a list of dicts.
    """
    text = source if isinstance(source, str) else source.read()
    comments, body = [], []
    for line in text.splitlines():
        if line.startswith("#"):
            comments.append(line[1:].strip())
        elif line:
            body.append(line)
    if not body:
        raise ValueError("table has no header row")
    reader = csv.reader(io.StringIO("\n".join(body)))
    columns = next(reader)
    rows = [dict(zip(columns, map(_parse, rec))) for rec in reader]
    return comments, columns, rows


def schema_of(comments) -> tuple[str, int] | None:
    for c in comments:
        if c.startswith("dqwalk schema="):
            name, _, version = c.split("=", 1)[1].rpartition("/")
            return name, int(version)
    return None


def is_finite(x) -> bool:
    return isinstance(x, (int, float)) and math.isfinite(x)
