"""Typed process-variable values: string, integer, float, boolean, bytes.

Values travel through the journal and the wire as tagged JSON objects so the
five types round-trip losslessly (JSON alone cannot carry bytes or keep
1 and 1.0 apart).
"""

from __future__ import annotations

import base64

TypedValue = str | int | float | bool | bytes

_TAGS = {"string": str, "integer": int, "float": float, "boolean": bool, "bytes": bytes}


def type_tag(value: TypedValue) -> str:
    if isinstance(value, bool):  # bool before int: bool is an int subclass
        return "boolean"
    if isinstance(value, str):
        return "string"
    if isinstance(value, int):
        return "integer"
    if isinstance(value, float):
        return "float"
    if isinstance(value, bytes):
        return "bytes"
    raise TypeError(f"unsupported variable type {type(value).__name__}")


def encode_value(value: TypedValue) -> dict:
    tag = type_tag(value)
    if tag == "bytes":
        return {"t": tag, "v": base64.b64encode(value).decode("ascii")}
    return {"t": tag, "v": value}


def decode_value(obj: dict) -> TypedValue:
    tag = obj["t"]
    if tag not in _TAGS:
        raise ValueError(f"unknown value tag '{tag}'")
    if tag == "bytes":
        return base64.b64decode(obj["v"])
    return _TAGS[tag](obj["v"])


def render_value(value: TypedValue) -> str:
    """Canonical string rendering, used by decision rules and log templates."""
    tag = type_tag(value)
    if tag == "boolean":
        return "true" if value else "false"
    if tag == "bytes":
        return base64.b64encode(value).decode("ascii")
    return str(value)
