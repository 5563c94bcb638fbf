"""Deterministic serialization for the CLI.

Floats are printed with 17 significant digits ('%.17g'), which round-trips
every finite double exactly; the decimal separator is always '.' (the
formatting never consults the locale).  JSON key order is the insertion
order of the payload builders, so identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import json
import math

from .errors import DomainError


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise DomainError(f"cannot serialize non-finite value {x!r}")
    return "%.17g" % x


def _encode(obj, pieces, indent, level):
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if obj is None:
        pieces.append("null")
    elif obj is True:
        pieces.append("true")
    elif obj is False:
        pieces.append("false")
    elif isinstance(obj, str):
        pieces.append(json.dumps(obj))
    elif isinstance(obj, int):
        pieces.append(str(obj))
    elif isinstance(obj, float):
        pieces.append(format_float(obj))
    elif isinstance(obj, dict):
        if not obj:
            pieces.append("{}")
            return
        pieces.append("{\n")
        for i, (key, val) in enumerate(obj.items()):
            if not isinstance(key, str):
                raise DomainError(f"JSON keys must be strings, got {key!r}")
            pieces.append(inner + json.dumps(key) + ": ")
            _encode(val, pieces, indent, level + 1)
            pieces.append(",\n" if i < len(obj) - 1 else "\n")
        pieces.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not len(obj):
            pieces.append("[]")
            return
        pieces.append("[\n")
        for i, val in enumerate(obj):
            pieces.append(inner)
            _encode(val, pieces, indent, level + 1)
            pieces.append(",\n" if i < len(obj) - 1 else "\n")
        pieces.append(pad + "]")
    else:
        try:
            import numpy as np

            if isinstance(obj, np.ndarray):
                _encode(obj.tolist(), pieces, indent, level)
                return
            if isinstance(obj, (np.floating,)):
                _encode(float(obj), pieces, indent, level)
                return
            if isinstance(obj, (np.integer,)):
                _encode(int(obj), pieces, indent, level)
                return
            if isinstance(obj, (np.bool_,)):
                _encode(bool(obj), pieces, indent, level)
                return
        except ImportError:  # pragma: no cover
            pass
        raise DomainError(f"cannot serialize object of type {type(obj)!r}")


def to_json(obj, indent: int = 1) -> str:
    pieces = []
    _encode(obj, pieces, indent, 0)
    pieces.append("\n")
    return "".join(pieces)


def to_csv(header, rows) -> str:
    """RFC-4180-style quoting, '\n' line endings, fixed header strings."""
    import csv
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_float(v) if isinstance(v, float) else v for v in row]
        )
    return buf.getvalue()


def envelope(command: str, parameters: dict, tolerances: dict, payload,
             reproducible: bool) -> dict:
    env = {
        "schema_version": "1.0",
        "command": command,
        "parameters": parameters,
        "tolerances": tolerances,
    }
    if not reproducible:
        import datetime
        import socket

        env["generated_at"] = datetime.datetime.now(
            datetime.timezone.utc
        ).isoformat()
        env["host"] = socket.gethostname()
    env["payload"] = payload
    return env
