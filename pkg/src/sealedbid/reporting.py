"""Canonical report rendering.

JSON reports use sorted keys, compact separators, and integer or "p/q"
string numerics only, so re-parsing and re-serializing a report is
byte-identical and golden files stay stable.  Floats are rejected
outright; nothing in this package computes one.
"""

from __future__ import annotations

import json


def _reject_floats(node, path: str = "$"):
    if isinstance(node, float):
        raise TypeError(f"float at {path} breaks canonical output; use ticks or p/q")
    if isinstance(node, dict):
        for key, value in node.items():
            if not isinstance(key, str):
                raise TypeError(f"non-string key {key!r} at {path}")
            _reject_floats(value, f"{path}.{key}")
    elif isinstance(node, (list, tuple)):
        for pos, value in enumerate(node):
            _reject_floats(value, f"{path}[{pos}]")


def canonical_json(doc: dict) -> str:
    """Serialize a report document to its one canonical byte form."""
    _reject_floats(doc)
    return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def _flatten(node, prefix: str = "") -> list[tuple[str, str]]:
    if isinstance(node, dict):
        rows = []
        for key in sorted(node):
            label = f"{prefix}.{key}" if prefix else key
            rows.extend(_flatten(node[key], label))
        return rows
    if isinstance(node, (list, tuple)):
        text = "[" + ", ".join(str(item) for item in node) + "]"
        return [(prefix, text)]
    return [(prefix, str(node))]


def render_table(doc: dict) -> str:
    """Aligned two-column view of a report, one flattened key per line."""
    rows = _flatten(doc)
    if not rows:
        return ""
    width = max(len(label) for label, _ in rows)
    return "".join(f"{label.ljust(width)}  {value}\n" for label, value in rows)
