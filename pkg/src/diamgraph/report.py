"""Structured pass/fail records produced by every check."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

# the statement each check establishes on an instance
CLAIMS = {
    "bound": "a diameter graph on n >= 4 points in R^3 has at most 2n-2 edges",
    "lemma1": "for distinct points x, y the regions R(x) and R(y) are disjoint",
    "lemma2": "R(x) meets B(y) only if xy is a diameter, and then exactly in the direction y-x",
    "lemma3": "unit x_i within distance 1 of y keep every unit nonnegative combination within distance 1 of y",
    "crossings": "the antipodal two-coloured double-cover drawing on the sphere has no crossings",
    "euler": "the crossing-free cover satisfies Euler's relation, so it has at most 4n-4 edges",
    "odd_cycles": "any two odd cycles of a diameter graph in R^3 share a vertex",
    "cycle_parity": "odd cycles are exactly the ones whose lift to the cover ends at the antipodal copy",
}


def to_plain(obj: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into JSON-ready Python values."""
    if isinstance(obj, np.ndarray):
        return [to_plain(x) for x in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(x) for x in obj]
    if hasattr(obj, "value") and isinstance(getattr(obj, "value"), str):
        return obj.value
    return obj


@dataclass
class VerificationReport:
    check: str
    passed: bool
    counts: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    tolerances: dict = field(default_factory=dict)
    truncated: dict = field(default_factory=dict)
    claim: str = ""

    def __post_init__(self):
        if not self.claim:
            self.claim = CLAIMS.get(self.check, self.check)
        if self.passed and self.witnesses:
            raise ValueError("a passing report cannot carry violation witnesses")

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "claim": self.claim,
            "pass": bool(self.passed),
            "counts": to_plain(self.counts),
            "witnesses": to_plain(self.witnesses),
            "tolerances": to_plain(self.tolerances),
            "truncated": to_plain(self.truncated),
        }

    def __repr__(self):
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.check} {self.counts}"
