"""Deterministic CSV/JSON emission (floats at 12 significant digits)."""

from __future__ import annotations

import json
import math
from typing import Iterable, Sequence

__all__ = ["fmt", "json_dumps", "rows_to_csv"]


def fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def rows_to_csv(header: str, rows: Iterable[Sequence]) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _round_floats(obj):
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return None
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def json_dumps(obj) -> str:
    return json.dumps(_round_floats(obj), sort_keys=True, indent=2) + "\n"
