"""Turn result objects into plain JSON values, with exact scalars as 'p/q' strings."""

from __future__ import annotations

import dataclasses
import json
from enum import Enum
from fractions import Fraction

from .exact import ComplexPair, Surd, format_scalar

__all__ = ["to_jsonable", "dumps"]


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, int):
        return obj
    if isinstance(obj, (float, Fraction, Surd, ComplexPair)):
        return format_scalar(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
        for name in getattr(type(obj), "_json_extras", ()):
            out[name] = to_jsonable(getattr(obj, name))
        return out
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(x) for x in items]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(to_jsonable(obj), sort_keys=True, separators=(",", ":"))
