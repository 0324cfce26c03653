"""End-to-end analysis of one point set: graph, core, regions, drawing, checks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .cover import SphericalDrawing, build_double_cover, euler_check, verify_no_crossings
from .cycles import DEFAULT_MAX_CYCLES, verify_odd_cycles_intersect
from .geometry import DEFAULT_TOL, Tolerance
from .graph import (DiameterGraph, PointSet, PruneRecord, build_diameter_graph,
                    prune_low_degree, verify_bound)
from .regions import SphericalRegion, build_regions, check_lemma1, check_lemma2
from .report import VerificationReport

__all__ = ["Analysis", "analyze", "GEOMETRIC_CHECKS", "run_checks"]

GEOMETRIC_CHECKS = ("bound", "lemma1", "lemma2", "crossings", "euler", "odd_cycles")


@dataclass
class Analysis:
    graph: DiameterGraph
    core: DiameterGraph
    record: PruneRecord
    regions: list
    drawing: Optional[SphericalDrawing]


def analyze(ps: PointSet, tol: Tolerance = DEFAULT_TOL, draw: bool = True) -> Analysis:
    g = build_diameter_graph(ps, tol)
    core, rec = prune_low_degree(g)
    regions: list[SphericalRegion] = []
    drawing = None
    if g.dimension == 3:
        regions = build_regions(core, tol)
        if draw:
            drawing = build_double_cover(core, regions, tol)
    return Analysis(g, core, rec, regions, drawing)


def run_checks(a: Analysis, checks: Iterable[str] = GEOMETRIC_CHECKS,
               max_cycles: int = DEFAULT_MAX_CYCLES) -> list[VerificationReport]:
    wanted = set(checks)
    out = []
    if "bound" in wanted:
        out.append(verify_bound(a.graph))
    if "lemma1" in wanted:
        out.append(check_lemma1(a.core, a.regions))
    if "lemma2" in wanted:
        out.append(check_lemma2(a.core, a.regions))
    if "crossings" in wanted:
        out.append(verify_no_crossings(a.drawing))
    if "euler" in wanted:
        out.append(euler_check(a.drawing).report(a.core.n, a.core.m))
    if "odd_cycles" in wanted:
        out.append(verify_odd_cycles_intersect(a.graph, max_count=max_cycles))
    return out
