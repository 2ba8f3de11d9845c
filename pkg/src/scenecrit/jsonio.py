"""Deterministic JSON writing shared by all artifact emitters.

Artifacts must be byte-identical across runs, so floats are rounded to a
fixed number of significant digits before dumping and key order is the
construction order (which every ``to_json`` keeps fixed).
"""

from __future__ import annotations

import json
import math
from pathlib import Path

ROUND_DIGITS = 6


def round_sig(value: float, digits: int = ROUND_DIGITS) -> float:
    if value == 0.0 or not math.isfinite(value):
        return value
    return float(f"{value:.{digits}g}")


def round_floats(obj, digits: int = ROUND_DIGITS):
    """Recursively round every float in a JSON-shaped structure."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return round_sig(obj, digits)
    if isinstance(obj, dict):
        return {k: round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v, digits) for v in obj]
    return obj


def canonical_dumps(doc, digits: int | None = ROUND_DIGITS, indent: int | None = None) -> str:
    """Dump a JSON document with stable float formatting.

    ``digits=None`` keeps exact float reprs (used where a parse round trip
    must reproduce the value bit-for-bit).
    """
    if digits is not None:
        doc = round_floats(doc, digits)
    separators = (",", ":") if indent is None else (",", ": ")
    return json.dumps(doc, indent=indent, separators=separators, allow_nan=False)


def dump_json_file(doc, path, digits: int | None = ROUND_DIGITS, indent: int | None = 2) -> None:
    Path(path).write_text(canonical_dumps(doc, digits, indent) + "\n", encoding="utf-8")


def load_json_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)
