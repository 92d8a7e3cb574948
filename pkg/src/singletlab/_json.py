"""Deterministic JSON writing with fixed-precision floats.

The stock ``json`` module renders floats with ``repr``, which is
round-trip exact but not pinned to a fixed digit count.  Every artifact
this package writes goes through :func:`dumps` instead, which renders
floats with 17 significant digits so that files are byte-identical
across runs and still parse back to the exact same double.
"""

from __future__ import annotations

import json
import math
from typing import Any

__all__ = ["dumps", "dump"]


def _render(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    inner = " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialize non-finite float {obj!r}")
        text = format(obj, ".17g")
        if not any(ch in text for ch in ".eE"):
            # keep integral floats (including -0.0) parsing back as floats
            text += ".0"
        return text
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [_render(x, indent, level + 1) for x in obj]
        return "[\n" + ",\n".join(inner + s for s in items) + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key, value in obj.items():
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be strings, got {key!r}")
            items.append(inner + json.dumps(key) + ": " + _render(value, indent, level + 1))
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__} to JSON")


def dumps(obj: Any, indent: int = 2) -> str:
    """Serialize ``obj`` to a deterministic JSON string."""
    return _render(obj, indent, 0) + "\n"


def dump(obj: Any, path: str, indent: int = 2) -> None:
    """Write ``obj`` as JSON to ``path``."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(dumps(obj, indent=indent))
