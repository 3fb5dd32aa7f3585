"""Output formatting shared by the CLI: headers, CSV rows, JSON documents.

CSV numbers are printed with 17 significant digits and JSON numbers with
Python's shortest round-trip repr, so files round-trip and replays are
byte-identical.  Schemas are described in docs/schemas.md.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Iterable, Sequence, TextIO

import mpmath
import numpy as np

from . import __version__

SCHEMA_VERSION = "1"


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, mpmath.mpf):
        x = float(x)
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return "%.17g" % x


def header_lines(command: str, argv: Sequence[str], seed) -> list[str]:
    return [
        f"# shapewalk {__version__} schema={SCHEMA_VERSION} command={command}",
        "# argv: " + " ".join(argv),
        f"# seed: {seed}",
    ]


def write_csv(out: TextIO, header: list[str], columns: Sequence[str], rows: Iterable[Sequence]) -> int:
    for line in header:
        out.write(line + "\n")
    out.write(",".join(columns) + "\n")
    n = 0
    for row in rows:
        out.write(",".join(fmt(x) for x in row) + "\n")
        n += 1
    return n


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (float, np.floating, mpmath.mpf)):
        x = float(x)
        # json emits the shortest round-trip repr, so replays stay byte-identical
        return x if math.isfinite(x) else str(x)
    return x


def write_json(out: TextIO, command: str, argv: Sequence[str], seed, payload: dict) -> None:
    doc = {
        "header": {"program": "shapewalk", "version": __version__, "schema": SCHEMA_VERSION,
                   "command": command, "argv": list(argv), "seed": seed},
    }
    doc.update(_jsonable(payload))
    out.write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def read_csv_columns(path: str) -> dict[str, list[str]]:
    """Columns of a CSV written by :func:`write_csv` (comment lines skipped)."""
    with open(path) as fh:
        lines = [ln.rstrip("\n") for ln in fh if not ln.startswith("#") and ln.strip()]
    if not lines:
        raise ValueError(f"{path}: no data")
    names = lines[0].split(",")
    cols = {n: [] for n in names}
    for ln in lines[1:]:
        for n, v in zip(names, ln.split(",")):
            cols[n].append(v)
    return cols
