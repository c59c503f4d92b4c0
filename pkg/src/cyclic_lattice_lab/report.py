"""JSON-ready conversion of results; canonical output for byte-stable reports."""
from __future__ import annotations

import dataclasses
import json
from fractions import Fraction

import numpy as np

SCHEMA = "cyclic-lattice-lab/1"
_I64_MIN, _I64_MAX = -(2 ** 63), 2 ** 63 - 1


def _int(v: int):
    # values outside int64 go out as decimal strings so no reader loses bits
    return v if _I64_MIN <= v <= _I64_MAX else str(v)


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, np.integer)):
        return _int(int(obj))
    if isinstance(obj, Fraction):
        return _int(obj.numerator) if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        return obj
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        out = {"type": type(obj).__name__}
        verdict = getattr(type(obj), "verdict", None)
        if isinstance(verdict, str):
            out["verdict"] = verdict
        for f in dataclasses.fields(obj):
            out[f.name] = to_jsonable(getattr(obj, f.name))
        return out
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def envelope(command: str, instance, result, seconds: float | None = None) -> dict:
    doc = {"schema": SCHEMA, "command": command, "instance": to_jsonable(instance), "result": to_jsonable(result)}
    if seconds is not None:
        doc["timing"] = {"seconds": round(seconds, 6)}
    return doc


def canonical(doc: dict) -> str:
    """Serialization used for determinism comparisons: sorted keys, no timing."""
    body = {k: v for k, v in doc.items() if k != "timing"}
    return json.dumps(body, sort_keys=True, separators=(",", ":"))


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2)


def parse_int(v) -> int:
    return int(v)


def parse_fraction(v) -> Fraction:
    return Fraction(v) if isinstance(v, str) else Fraction(int(v))
