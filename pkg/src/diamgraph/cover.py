"""Centrally symmetric drawing of the two-coloured double cover on the sphere.

Each core vertex ``x`` gets a red hub ``x_r`` inside ``R(x)`` and a blue hub
``x_b = -x_r``. A diameter ``xy`` is drawn twice: ``x_r -> (y - x) -> y_b``
and its antipodal image ``y_r -> (x - y) -> x_b``. The middle point of each
polyline is a *junction*; for counting purposes a drawn edge is one edge.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import _kernels
from .errors import (DegenerateRegion, InconsistentRotation, JunctionCoincidesWithHub,
                     NotACycle)
from .geometry import (DEFAULT_TOL, GreatArc, Tolerance, angular_distance, arc_intersect,
                       tangent_frame)
from .graph import DiameterGraph
from .regions import Color, SphericalRegion, build_regions, interior_point
from .report import VerificationReport

__all__ = [
    "CoverVertex",
    "DrawnEdge",
    "SphericalDrawing",
    "build_double_cover",
    "verify_no_crossings",
    "EulerResult",
    "euler_check",
    "CycleClass",
    "classify_cycle",
    "lift_walk",
]


@dataclass(frozen=True)
class CoverVertex:
    owner: int
    color: Color
    position: np.ndarray

    @property
    def index(self) -> int:
        return hub_index(self.owner, self.color)


def hub_index(owner: int, color: Color) -> int:
    return 2 * owner + (0 if color is Color.RED else 1)


@dataclass(frozen=True)
class DrawnEdge:
    """Polyline ``[red hub, junction, blue hub]`` drawing diameter ``edge``.

    ``edge = (x, y)`` means the red end belongs to ``x`` and the blue end to
    ``y``; ``twin`` indexes the antipodal drawn edge.
    """

    edge: tuple
    red_hub: int
    blue_hub: int
    polyline: np.ndarray
    twin: int

    @property
    def junction(self) -> np.ndarray:
        return self.polyline[1]

    def hubs(self) -> tuple[int, int]:
        return self.red_hub, self.blue_hub


@dataclass
class SphericalDrawing:
    vertices: list
    edges: list
    rotation: tuple
    graph_n: int
    graph_m: int
    tol: Tolerance = DEFAULT_TOL
    regions: Optional[list] = field(default=None, repr=False)

    @property
    def V(self) -> int:
        return len(self.vertices)

    @property
    def E(self) -> int:
        return len(self.edges)

    def subarcs(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Start points, end points and hub ids of the 2E sub-arcs.

        Sub-arc ``2k`` runs from the red hub of drawn edge ``k`` to its
        junction, sub-arc ``2k + 1`` from the junction to the blue hub.
        """
        starts = np.empty((2 * self.E, 3))
        ends = np.empty((2 * self.E, 3))
        hubs = np.empty(2 * self.E, dtype=np.int64)
        for k, e in enumerate(self.edges):
            starts[2 * k], ends[2 * k] = e.polyline[0], e.polyline[1]
            starts[2 * k + 1], ends[2 * k + 1] = e.polyline[1], e.polyline[2]
            hubs[2 * k], hubs[2 * k + 1] = e.red_hub, e.blue_hub
        return starts, ends, hubs


def _tangent_angle(hub: np.ndarray, toward: np.ndarray, frame) -> float:
    e1, e2 = frame
    t = toward - float(np.dot(toward, hub)) * hub
    return math.atan2(float(np.dot(t, e2)), float(np.dot(t, e1)))


def rotation_system(vertices: Sequence[CoverVertex], edges: Sequence[DrawnEdge]) -> tuple:
    """Counterclockwise (seen from outside) order of drawn edges around each hub."""
    incident: list[list[tuple[float, int]]] = [[] for _ in vertices]
    frames = [tangent_frame(v.position) for v in vertices]
    for k, e in enumerate(edges):
        for h in e.hubs():
            pos = vertices[h].position
            incident[h].append((_tangent_angle(pos, e.junction, frames[h]), k))
    return tuple(tuple(k for _, k in sorted(inc)) for inc in incident)


def build_double_cover(g: DiameterGraph, regions: Optional[Sequence[SphericalRegion]] = None,
                       tol: Optional[Tolerance] = None) -> SphericalDrawing:
    """Assemble the drawing for a pruned core graph (minimum degree two, d = 3)."""
    tol = tol or g.tol
    low = [v for v in range(g.n) if g.degree(v) < 2]
    if low:
        raise DegenerateRegion(f"vertices {low[:5]} have degree < 2; prune the graph first")
    regions = list(regions) if regions is not None else build_regions(g, tol)
    by_owner = {r.owner: r for r in regions}
    if sorted(by_owner) != list(range(g.n)):
        raise ValueError("need exactly one region per core vertex")
    regions = [by_owner[v] for v in range(g.n)]
    vertices: list[CoverVertex] = []
    for r in regions:
        hub = interior_point(r, tol)
        vertices.append(CoverVertex(r.owner, Color.RED, hub))
        vertices.append(CoverVertex(r.owner, Color.BLUE, -hub))

    edges: list[DrawnEdge] = []
    for i, j in g.edges:
        for x, y in ((i, j), (j, i)):
            red, blue = hub_index(x, Color.RED), hub_index(y, Color.BLUE)
            junction = regions[x].neighbor_dirs[y]
            line = np.array([vertices[red].position, junction, vertices[blue].position])
            if (angular_distance(line[0], junction) <= tol.eps_geo
                    or angular_distance(line[2], junction) <= tol.eps_geo):
                raise JunctionCoincidesWithHub(f"junction of edge {(x, y)} sits on a hub")
            k = len(edges)
            edges.append(DrawnEdge((x, y), red, blue, line, k + 1 if x == i else k - 1))

    return SphericalDrawing(vertices, edges, rotation_system(vertices, edges),
                            g.n, g.m, tol, regions)


def _candidate_pairs(starts: np.ndarray, ends: np.ndarray, eps: float) -> np.ndarray:
    """Arc pairs whose bounding caps overlap."""
    mids = starts + ends
    mids /= np.linalg.norm(mids, axis=1)[:, None]
    half = 0.5 * np.arctan2(np.linalg.norm(np.cross(starts, ends), axis=1),
                            np.einsum("ij,ij->i", starts, ends))
    cosines = np.clip(mids @ mids.T, -1.0, 1.0)
    apart = np.arccos(cosines)
    close = apart <= half[:, None] + half[None, :] + 1e-6 + 10 * eps
    i, j = np.nonzero(np.triu(close, k=1))
    return np.ascontiguousarray(np.column_stack([i, j]).astype(np.int64))


def verify_no_crossings(dr: SphericalDrawing, tol: Optional[Tolerance] = None) -> VerificationReport:
    """All sub-arcs pairwise disjoint, except sub-arcs leaving one hub (meeting
    only at that hub) and the two halves of one drawn edge (meeting only at
    its junction)."""
    tol = tol or dr.tol
    eps = tol.eps_geo
    witnesses = []
    if dr.E == 0:
        return VerificationReport("crossings", True, counts={"subarcs": 0, "candidate_pairs": 0,
                                                             "violations": 0},
                                  tolerances=tol.as_dict())
    starts, ends, hubs = dr.subarcs()
    pairs = _candidate_pairs(starts, ends, eps)
    codes = _kernels.classify_arc_pairs(np.ascontiguousarray(starts), np.ascontiguousarray(ends),
                                        pairs, eps)
    for (a, b), code in zip(pairs.tolist(), codes.tolist()):
        if code == 0:
            continue
        relation = _kernels.ARC_CODES[code]
        A, B = GreatArc(starts[a], ends[a], tol), GreatArc(starts[b], ends[b], tol)
        hit = arc_intersect(A, B, tol)
        point = hit.point if hit.point is not None else None
        if relation == "shared_endpoint" and point is not None:
            if a // 2 == b // 2 and angular_distance(point, dr.edges[a // 2].junction) <= eps:
                continue
            if hubs[a] == hubs[b] and angular_distance(point, dr.vertices[hubs[a]].position) <= eps:
                continue
        witnesses.append({
            "subarcs": [a, b],
            "drawn_edges": [dr.edges[a // 2].edge, dr.edges[b // 2].edge],
            "relation": relation,
            "point": point,
        })
    return VerificationReport(
        "crossings", not witnesses,
        counts={"subarcs": len(starts), "candidate_pairs": len(pairs), "violations": len(witnesses)},
        witnesses=witnesses, tolerances=tol.as_dict(),
    )


@dataclass(frozen=True)
class EulerResult:
    V: int
    E: int
    F: int
    passed: bool
    components: int
    face_lengths: tuple
    # per component (V_c, E_c, F_c); each must satisfy V_c - E_c + F_c = 2
    per_component: tuple

    def __iter__(self):
        return iter((self.V, self.E, self.F, self.passed))

    def report(self, graph_n: int = 0, graph_m: int = 0) -> VerificationReport:
        witnesses = [] if self.passed else [
            {"component": i, "V": v, "E": e, "F": f, "euler": v - e + f}
            for i, (v, e, f) in enumerate(self.per_component) if v - e + f != 2
        ] or [{"V": self.V, "E": self.E, "graph_n": graph_n, "graph_m": graph_m}]
        return VerificationReport(
            "euler", self.passed,
            counts={"V": self.V, "E": self.E, "F": self.F, "components": self.components,
                    "euler_characteristic": self.V - self.E + self.F,
                    "graph_n": graph_n, "graph_edges": graph_m,
                    "cover_bound": 2 * self.V - 4 if self.V >= 3 else 0},
            witnesses=witnesses,
        )


def _trace_faces(dr: SphericalDrawing) -> list[list[tuple[int, int]]]:
    pos = [{k: i for i, k in enumerate(rot)} for rot in dr.rotation]
    ends = [e.hubs() for e in dr.edges]
    seen = set()
    faces = []
    limit = 2 * dr.E + 1
    for k in range(dr.E):
        for side in (0, 1):
            if (k, side) in seen:
                continue
            face = []
            dart = (k, side)
            while dart not in seen:
                seen.add(dart)
                face.append(dart)
                if len(face) > limit:
                    raise InconsistentRotation("face walk did not close")
                edge, s = dart
                head = ends[edge][1 - s]
                rot = dr.rotation[head]
                try:
                    nxt = rot[(pos[head][edge] - 1) % len(rot)]
                except KeyError:
                    raise InconsistentRotation(f"edge {edge} missing from rotation at hub {head}")
                dart = (nxt, 0 if ends[nxt][0] == head else 1)
            if dart != face[0]:
                raise InconsistentRotation("face walk re-entered a traced face")
            faces.append(face)
    return faces


def euler_check(dr: SphericalDrawing) -> EulerResult:
    """Trace faces from the rotation system and check Euler's relation per component."""
    if dr.V == 0:
        return EulerResult(0, 0, 0, True, 0, (), ())
    parent = list(range(dr.V))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in dr.edges:
        ra, rb = find(e.red_hub), find(e.blue_hub)
        if ra != rb:
            parent[ra] = rb
    roots = sorted({find(v) for v in range(dr.V)})
    comp = {r: i for i, r in enumerate(roots)}
    faces = _trace_faces(dr)
    per = [[0, 0, 0] for _ in roots]
    for v in range(dr.V):
        per[comp[find(v)]][0] += 1
    for e in dr.edges:
        per[comp[find(e.red_hub)]][1] += 1
    for face in faces:
        per[comp[find(dr.edges[face[0][0]].red_hub)]][2] += 1
    per_t = tuple(tuple(p) for p in per)
    C = len(roots)
    F = len(faces) - (C - 1)
    ok = all(v - e + f == 2 for v, e, f in per_t)
    ok = ok and dr.E == 2 * dr.graph_m and dr.graph_m <= 2 * dr.graph_n - 2
    if dr.V >= 3:
        ok = ok and dr.E <= 2 * dr.V - 4
    return EulerResult(dr.V, dr.E, F, ok, C, tuple(len(f) for f in faces), per_t)


class CycleClass(str, enum.Enum):
    CONTRACTIBLE = "contractible"
    NONCONTRACTIBLE = "noncontractible"


def _check_cycle(g: DiameterGraph, cycle: Sequence[int]) -> list[int]:
    cyc = [int(v) for v in cycle]
    if len(cyc) >= 2 and cyc[0] == cyc[-1]:
        cyc = cyc[:-1]
    if len(cyc) < 3 or len(set(cyc)) != len(cyc):
        raise NotACycle(f"{list(cycle)} is not a simple cycle")
    for a, b in zip(cyc, cyc[1:] + cyc[:1]):
        if not (0 <= a < g.n and 0 <= b < g.n) or not g.has_edge(a, b):
            raise NotACycle(f"{a}-{b} is not an edge")
    return cyc


def lift_walk(g: DiameterGraph, cycle: Sequence[int],
              drawing: Optional[SphericalDrawing] = None) -> tuple[int, int]:
    """Walk the cycle in the cover starting from the red copy of its first vertex.

    Returns ``(start_hub, end_hub)``. With a drawing the walk follows its
    actual drawn edges; otherwise it uses the combinatorial cover.
    """
    cyc = _check_cycle(g, cycle)
    start = hub_index(cyc[0], Color.RED)
    if drawing is None:
        colour = Color.RED
        for _ in cyc:
            colour = colour.other
        return start, hub_index(cyc[0], colour)
    by_hub: dict[tuple[int, int], int] = {}
    for e in drawing.edges:
        r, b = e.hubs()
        by_hub[(r, drawing.vertices[b].owner)] = b
        by_hub[(b, drawing.vertices[r].owner)] = r
    hub = start
    for w in cyc[1:] + cyc[:1]:
        try:
            hub = by_hub[(hub, w)]
        except KeyError:
            raise NotACycle(f"no drawn edge from hub {hub} to a copy of {w}")
    return start, hub


def classify_cycle(g: DiameterGraph, cycle: Sequence[int],
                   drawing: Optional[SphericalDrawing] = None) -> CycleClass:
    """Odd cycles are noncontractible in the projective quotient; the lift
    walk must agree (closed lift iff even length)."""
    cyc = _check_cycle(g, cycle)
    by_parity = CycleClass.NONCONTRACTIBLE if len(cyc) % 2 else CycleClass.CONTRACTIBLE
    start, end = lift_walk(g, cyc, drawing)
    by_lift = CycleClass.CONTRACTIBLE if start == end else CycleClass.NONCONTRACTIBLE
    if by_lift is not by_parity:
        raise AssertionError(f"lift walk disagrees with parity for cycle {cyc}")
    if drawing is not None and start != end:
        p, q = drawing.vertices[start].position, drawing.vertices[end].position
        if angular_distance(p, -q) > drawing.tol.eps_geo:
            raise AssertionError(f"open lift of {cyc} does not end at the antipodal copy")
    return by_parity
