"""JSON formats: point sets, verification reports, drawings and search traces.

Floats are written with 17 significant digits so every double survives a
round trip, and keys are sorted, so equal inputs give byte-identical files.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable, Optional

import jsonschema
import numpy as np

from .errors import DuplicatePoints, InvariantError, SchemaError
from .geometry import DEFAULT_TOL, Tolerance
from .graph import PointSet
from .report import VerificationReport, to_plain

__all__ = [
    "POINTSET_SCHEMA",
    "dumps",
    "dumps_pointset",
    "parse_pointset",
    "parse_pointset_document",
    "drawing_to_dict",
    "reports_to_dict",
    "dumps_reports",
    "trace_lines",
]

POINTSET_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["dimension", "points"],
    "properties": {
        "dimension": {"type": "integer", "minimum": 2},
        "points": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}},
        },
        "labels": {"type": "array", "items": {"type": "string"}},
        "metadata": {"type": "object"},
    },
}


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialise non-finite value {x!r}")
    s = format(x, ".17g")
    if not any(c in s for c in ".en"):
        s += ".0"
    return s


def _encode(obj: Any, indent: Optional[int], level: int, out: list) -> None:
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, float):
        out.append(_fmt_float(obj))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        # numeric rows stay on one line
        flat = indent is None or all(isinstance(v, (int, float)) for v in obj)
        out.append("[")
        for i, v in enumerate(obj):
            if i:
                out.append(",")
            if not flat:
                out.append("\n" + " " * (indent * (level + 1)))
            _encode(v, indent, level + 1, out)
        if not flat:
            out.append("\n" + " " * (indent * level))
        out.append("]")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{")
        for i, key in enumerate(sorted(obj)):
            if i:
                out.append(",")
            if indent is not None:
                out.append("\n" + " " * (indent * (level + 1)))
            out.append(json.dumps(str(key)) + ":")
            if indent is not None:
                out.append(" ")
            _encode(obj[key], indent, level + 1, out)
        if indent is not None:
            out.append("\n" + " " * (indent * level))
        out.append("}")
    else:
        _encode(to_plain(obj), indent, level, out)


def dumps(obj: Any, indent: Optional[int] = 2) -> str:
    """Deterministic JSON text with 17-significant-digit floats."""
    out: list[str] = []
    _encode(to_plain(obj), indent, 0, out)
    return "".join(out)


def dumps_pointset(ps: PointSet, metadata: Optional[dict] = None) -> str:
    doc = {"dimension": ps.dimension, "points": ps.points.tolist()}
    if ps.labels is not None:
        doc["labels"] = list(ps.labels)
    if metadata:
        doc["metadata"] = metadata
    return dumps(doc) + "\n"


def parse_pointset_document(data, tol: Tolerance = DEFAULT_TOL) -> tuple[PointSet, dict]:
    """Parse point-set JSON; returns the point set and its metadata map."""
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError(f"input is not UTF-8: {exc}") from None
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON: {exc}") from None
    try:
        jsonschema.validate(doc, POINTSET_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise SchemaError(f"point-set schema: {exc.message}") from None

    dim = doc["dimension"]
    rows = doc["points"]
    for i, row in enumerate(rows):
        if len(row) != dim:
            raise InvariantError(f"point {i} has {len(row)} coordinates, dimension is {dim}")
    pts = np.array(rows, dtype=np.float64).reshape(len(rows), dim)
    if not np.all(np.isfinite(pts)):
        raise InvariantError("coordinates must be finite")
    labels = doc.get("labels")
    if labels is not None and len(labels) != len(rows):
        raise InvariantError("labels and points differ in length")
    try:
        ps = PointSet(pts, labels, tol=tol, dimension=dim)
    except DuplicatePoints as exc:
        raise InvariantError(f"duplicate points: {exc}") from None
    except ValueError as exc:
        raise InvariantError(str(exc)) from None
    return ps, doc.get("metadata", {})


def parse_pointset(data, tol: Tolerance = DEFAULT_TOL) -> PointSet:
    return parse_pointset_document(data, tol)[0]


def drawing_to_dict(dr) -> dict:
    return {
        "graph": {"n": dr.graph_n, "edges": dr.graph_m},
        "vertices": [
            {"index": v.index, "owner": v.owner, "color": v.color.value, "position": v.position}
            for v in dr.vertices
        ],
        "edges": [
            {"edge": list(e.edge), "red_hub": e.red_hub, "blue_hub": e.blue_hub,
             "polyline": e.polyline, "twin": e.twin}
            for e in dr.edges
        ],
        "rotation": [list(r) for r in dr.rotation],
        "tolerances": dr.tol.as_dict(),
    }


def reports_to_dict(reports: Iterable[VerificationReport], **extra) -> dict:
    reports = list(reports)
    doc = {"pass": all(r.passed for r in reports), "reports": [r.to_dict() for r in reports]}
    doc.update(extra)
    return doc


def dumps_reports(reports: Iterable[VerificationReport], **extra) -> str:
    return dumps(reports_to_dict(reports, **extra)) + "\n"


def trace_lines(trace: Iterable[dict]) -> str:
    """Line-delimited JSON, one record per line."""
    return "".join(dumps(rec, indent=None) + "\n" for rec in trace)
