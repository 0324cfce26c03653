"""Point sets, their diameter, the diameter graph and degree pruning."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.spatial import ConvexHull, cKDTree
from scipy.spatial import QhullError

from . import _kernels
from .errors import DimensionUnsupported, DuplicatePoints, TooFewPoints, ZeroDiameter
from .geometry import DEFAULT_TOL, Tolerance
from .report import VerificationReport

__all__ = [
    "PointSet",
    "DiameterGraph",
    "PruneRecord",
    "compute_diameter",
    "compute_diameter_fast",
    "build_diameter_graph",
    "prune_low_degree",
    "verify_bound",
    "restored_counts",
]


class PointSet:
    """Labelled points in R^d; pairwise distinct, finite coordinates."""

    __slots__ = ("points", "labels")

    def __init__(self, points, labels: Optional[Sequence[str]] = None,
                 tol: Tolerance = DEFAULT_TOL, dimension: Optional[int] = None):
        pts = np.array(points, dtype=np.float64)
        if pts.size == 0:
            if dimension is None:
                raise ValueError("dimension is required for an empty point set")
            pts = pts.reshape(0, dimension)
        if pts.ndim != 2:
            raise ValueError(f"points must be an (n, d) array, got shape {pts.shape}")
        if dimension is not None and pts.shape[1] != dimension:
            raise ValueError(f"points have dimension {pts.shape[1]}, expected {dimension}")
        if pts.shape[1] < 2:
            raise ValueError("dimension must be at least 2")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != len(pts):
                raise ValueError("labels and points differ in length")
        if len(pts) > 1:
            close = cKDTree(pts).query_pairs(r=tol.eps_geo, output_type="ndarray")
            if len(close):
                i, j = sorted(int(v) for v in close[np.lexsort(close.T[::-1])][0])
                raise DuplicatePoints(f"points {i} and {j} coincide")
        pts.setflags(write=False)
        self.points = pts
        self.labels = labels

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, PointSet):
            return NotImplemented
        return (self.points.shape == other.points.shape
                and bool(np.array_equal(self.points, other.points))
                and self.labels == other.labels)

    def __repr__(self):
        return f"PointSet(n={self.n}, d={self.dimension})"

    def subset(self, indices: Sequence[int]) -> "PointSet":
        idx = list(indices)
        labels = None if self.labels is None else [self.labels[i] for i in idx]
        out = PointSet.__new__(PointSet)
        pts = self.points[idx].copy() if idx else np.empty((0, self.dimension))
        pts.setflags(write=False)
        out.points = pts
        out.labels = None if labels is None else tuple(labels)
        return out


def compute_diameter(ps: PointSet) -> tuple[float, tuple[int, int]]:
    """Brute-force diameter over all pairs; the first maximising pair is the witness."""
    if ps.n < 2:
        raise TooFewPoints("the diameter needs at least two points")
    pts = ps.points
    best, witness = -1.0, (0, 1)
    for i in range(ps.n - 1):
        d2 = np.sum((pts[i + 1:] - pts[i]) ** 2, axis=1)
        j = int(np.argmax(d2))
        if d2[j] > best:
            best, witness = float(d2[j]), (i, i + 1 + j)
    return float(np.sqrt(best)), witness


def _candidate_indices(pts: np.ndarray) -> np.ndarray:
    """Points that can be endpoints of a diameter: hull vertices, then an extent filter."""
    try:
        cand = np.sort(ConvexHull(pts).vertices)
    except (QhullError, ValueError):
        return np.arange(len(pts))
    sub = pts[cand]
    centre = sub.mean(axis=0)
    radius = np.sqrt(np.sum((sub - centre) ** 2, axis=1))
    far = int(np.argmax(radius))
    # distance from the farthest-from-centre point to its own farthest point bounds D below
    lower = float(np.sqrt(np.max(np.sum((sub - sub[far]) ** 2, axis=1))))
    keep = radius + radius.max() >= lower * (1.0 - 1e-9)
    return cand[keep]


def compute_diameter_fast(ps: PointSet) -> tuple[float, tuple[int, int]]:
    """Diameter via convex-hull pruning and the compiled pair scan (d = 3)."""
    if ps.n < 2:
        raise TooFewPoints("the diameter needs at least two points")
    pts = ps.points
    if ps.dimension == 3 and ps.n > 64:
        cand = _candidate_indices(pts)
    else:
        cand = np.arange(ps.n)
    d2, i, j = _kernels.max_pair_sq(np.ascontiguousarray(pts[cand]))
    a, b = sorted((int(cand[i]), int(cand[j])))
    return float(np.sqrt(d2)), (a, b)


@dataclass(frozen=True)
class DiameterGraph:
    """Diameter graph of a point set rescaled to diameter one.

    ``scale`` is the diameter of the original input, so ``points * scale``
    recovers the input coordinates.
    """

    points: PointSet
    edges: tuple
    scale: float = 1.0
    diameter: float = 1.0
    tol: Tolerance = DEFAULT_TOL
    adjacency: tuple = field(init=False, repr=False)

    def __post_init__(self):
        adj: list[list[int]] = [[] for _ in range(self.points.n)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(a)) for a in adj))

    @property
    def n(self) -> int:
        return self.points.n

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def dimension(self) -> int:
        return self.points.dimension

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.adjacency[i]

    def coords(self, v: int) -> np.ndarray:
        return self.points.points[v]


def build_diameter_graph(ps: PointSet, tol: Tolerance = DEFAULT_TOL) -> DiameterGraph:
    """Rescale to diameter 1 and join every pair at distance >= 1 - eps_diam."""
    if ps.n < 2:
        raise TooFewPoints("a diameter graph needs at least two points")
    diam, _ = compute_diameter_fast(ps)
    if diam <= 0.0:
        raise ZeroDiameter("all points coincide")
    scaled = np.ascontiguousarray(ps.points / diam)
    pairs = _kernels.pairs_at_least(scaled, (1.0 - tol.eps_diam) ** 2)
    edges = tuple((int(i), int(j)) for i, j in pairs)
    rescaled = PointSet.__new__(PointSet)
    scaled.setflags(write=False)
    rescaled.points = scaled
    rescaled.labels = ps.labels
    return DiameterGraph(points=rescaled, edges=edges, scale=diam, tol=tol)


@dataclass(frozen=True)
class PruneRecord:
    """Removal log of the degree <= 1 pruning.

    ``removals`` lists ``(vertex, edge)`` in original indices, where ``edge``
    is the single incident edge at removal time or ``None``. ``kept[c]`` is
    the original index of core vertex ``c``.
    """

    removals: tuple
    kept: tuple
    n_original: int
    m_original: int

    def replay(self, g: DiameterGraph) -> tuple[set, set]:
        """Re-run the removals on ``g``, checking each removed vertex had degree <= 1."""
        alive = set(range(g.n))
        live_edges = {tuple(e) for e in g.edges}
        for v, edge in self.removals:
            incident = {e for e in live_edges if v in e}
            if len(incident) > 1:
                raise AssertionError(f"vertex {v} had degree {len(incident)} at removal")
            if (edge is None) != (not incident) or (edge is not None and tuple(edge) not in incident):
                raise AssertionError(f"recorded edge for vertex {v} does not match replay")
            live_edges -= incident
            alive.discard(v)
        return alive, live_edges


def prune_low_degree(g: DiameterGraph) -> tuple[DiameterGraph, PruneRecord]:
    """Repeatedly delete every vertex of degree at most one.

    Each round removes all current low-degree vertices in index order; an
    edge is charged to whichever endpoint is removed first.
    """
    adj = [set(a) for a in g.adjacency]
    alive = set(range(g.n))
    removals = []
    while True:
        batch = sorted(v for v in alive if len(adj[v]) <= 1)
        if not batch:
            break
        for v in batch:
            if len(adj[v]) == 1:
                (u,) = adj[v]
                removals.append((v, (min(u, v), max(u, v))))
                adj[u].discard(v)
                adj[v].clear()
            else:
                removals.append((v, None))
            alive.discard(v)
    kept = tuple(sorted(alive))
    index = {v: c for c, v in enumerate(kept)}
    edges = tuple((index[i], index[j]) for i, j in g.edges if i in index and j in index)
    core = DiameterGraph(points=g.points.subset(kept), edges=edges, scale=g.scale, tol=g.tol)
    return core, PruneRecord(tuple(removals), kept, g.n, g.m)


def restored_counts(core: DiameterGraph, rec: PruneRecord) -> tuple[int, int]:
    """Vertex and edge counts after adding the pruned vertices back."""
    n = core.n + len(rec.removals)
    m = core.m + sum(1 for _, e in rec.removals if e is not None)
    return n, m


def verify_bound(g: DiameterGraph) -> VerificationReport:
    """Check the edge count of a 3-dimensional diameter graph against 2n-2."""
    if g.dimension != 3:
        raise DimensionUnsupported(f"the 2n-2 bound is for R^3, got d={g.dimension}")
    bound = 2 * g.n - 2
    passed = g.m <= bound
    witnesses = [] if passed else [{"edges": g.m, "bound": bound, "excess": g.m - bound}]
    return VerificationReport(
        "bound", passed,
        counts={"n": g.n, "edges": g.m, "bound": bound, "equality": g.m == bound},
        witnesses=witnesses, tolerances=g.tol.as_dict(),
    )
