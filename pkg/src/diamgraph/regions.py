"""Direction regions R(x), their antipodes B(x), and instance checks of the lemmas.

For a vertex ``x`` of a diameter graph scaled to diameter one, ``R(x)`` is the
part of the unit sphere inside the cone spanned by the unit directions
``y - x`` to its diameter neighbours. ``B(x) = -R(x)``.
"""

from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (DegenerateRegion, DimensionUnsupported, InvalidInstance,
                     NotInHemisphere, SamplingExhausted)
from .geometry import (DEFAULT_TOL, ArcRelation, GreatArc, HullKind, Location,
                       SphericalHull, Tolerance, angular_distance, arc_intersect,
                       hemisphere_witness, normalize, point_in_region, spherical_hull)
from .graph import DiameterGraph
from .report import VerificationReport

__all__ = [
    "Color",
    "SphericalRegion",
    "build_region",
    "build_regions",
    "antipode",
    "interior_point",
    "region_contacts",
    "check_lemma1",
    "check_lemma2",
    "Lemma3Instance",
    "Lemma3Result",
    "check_lemma3",
    "random_lemma3_instance",
    "lemma3_suite",
]


class Color(str, enum.Enum):
    RED = "red"
    BLUE = "blue"

    @property
    def other(self) -> "Color":
        return Color.BLUE if self is Color.RED else Color.RED


@dataclass(frozen=True)
class SphericalRegion:
    owner: int
    color: Color
    hull: SphericalHull
    neighbor_dirs: dict = field(default_factory=dict)
    # neighbours whose direction is not a hull vertex
    non_extreme: tuple = ()

    @property
    def kind(self) -> HullKind:
        return self.hull.kind

    @property
    def vertices(self) -> np.ndarray:
        return self.hull.vertices

    @property
    def witness(self) -> np.ndarray:
        return self.hull.witness

    def contains(self, p, tol: Tolerance = DEFAULT_TOL, arc_interior: bool = True) -> Location:
        return point_in_region(p, self.hull, tol, arc_interior=arc_interior)

    def boundary_arcs(self, tol: Tolerance = DEFAULT_TOL) -> list[GreatArc]:
        if tol is DEFAULT_TOL:
            return self._default_arcs
        return [GreatArc(a, b, tol) for a, b in self.hull.edges()]

    @functools.cached_property
    def _default_arcs(self) -> list[GreatArc]:
        return [GreatArc(a, b) for a, b in self.hull.edges()]

    @functools.cached_property
    def cap(self) -> tuple[np.ndarray, float]:
        """Bounding spherical cap: (centre, angular radius)."""
        c = self.witness
        return c, max(angular_distance(c, v) for v in self.vertices)


def build_region(g: DiameterGraph, x: int, tol: Optional[Tolerance] = None) -> SphericalRegion:
    """Red region of vertex ``x``: spherical hull of its unit neighbour directions."""
    tol = tol or g.tol
    if g.dimension != 3:
        raise DimensionUnsupported("regions are built on the 2-sphere (d = 3)")
    nbrs = g.adjacency[x]
    if len(nbrs) < 2:
        raise DegenerateRegion(f"vertex {x} has degree {len(nbrs)}; prune the graph first")
    origin = g.coords(x)
    dirs = np.array([normalize(g.coords(y) - origin, tol) for y in nbrs])
    hull = spherical_hull(dirs, tol)
    extreme = set(hull.indices)
    non_extreme = tuple(y for k, y in enumerate(nbrs)
                        if k not in extreme
                        and min(angular_distance(dirs[k], v) for v in hull.vertices) > tol.eps_geo)
    return SphericalRegion(
        owner=x, color=Color.RED, hull=hull,
        neighbor_dirs={y: dirs[k] for k, y in enumerate(nbrs)},
        non_extreme=non_extreme,
    )


def build_regions(g: DiameterGraph, tol: Optional[Tolerance] = None) -> list[SphericalRegion]:
    return [build_region(g, x, tol) for x in range(g.n)]


def antipode(r: SphericalRegion) -> SphericalRegion:
    """Pointwise negation. Polygon order is reversed (first vertex kept) so the
    result is again counterclockwise seen from outside."""
    h = r.hull
    order = list(range(len(h.vertices)))
    if h.kind is HullKind.POLYGON:
        order = [0] + order[:0:-1]
    hull = SphericalHull(h.kind, -h.vertices[order], -h.witness,
                         tuple(h.indices[i] for i in order))
    return SphericalRegion(
        owner=r.owner, color=r.color.other, hull=hull,
        neighbor_dirs={k: -v for k, v in r.neighbor_dirs.items()},
        non_extreme=r.non_extreme,
    )


def interior_point(r: SphericalRegion, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Normalized vertex sum; lies in the (relative) interior of arcs and polygons."""
    if r.kind is HullKind.POINT:
        raise DegenerateRegion(f"region of vertex {r.owner} is a single point")
    return normalize(r.vertices.sum(axis=0), tol)


def _caps_apart(r: SphericalRegion, s: SphericalRegion, eps: float) -> bool:
    (c1, r1), (c2, r2) = r.cap, s.cap
    return angular_distance(c1, c2) > r1 + r2 + 10 * eps


def region_contacts(r: SphericalRegion, s: SphericalRegion,
                    tol: Tolerance = DEFAULT_TOL) -> list[dict]:
    """Every piece of evidence that two convex regions share a point.

    Boundary arcs are intersected pairwise, each vertex of one region is
    located in the other, and one interior point of each is located in the
    other (catches containment without boundary contact).
    """
    eps = tol.eps_geo
    if _caps_apart(r, s, eps):
        return []
    found = []
    arcs_r, arcs_s = r.boundary_arcs(tol), s.boundary_arcs(tol)
    for i, a in enumerate(arcs_r):
        for j, b in enumerate(arcs_s):
            hit = arc_intersect(a, b, tol)
            if hit:
                rec = {"type": "arc", "relation": hit.kind.value, "arcs": [i, j], "point": hit.point}
                if hit.kind is ArcRelation.OVERLAP:
                    rec["subarc"] = list(hit.subarc)
                found.append(rec)
    for src, dst, tag in ((r, s, "vertex_in_second"), (s, r, "vertex_in_first")):
        for v in src.vertices:
            loc = dst.contains(v, tol)
            if loc is not Location.OUTSIDE:
                found.append({"type": tag, "location": loc.value, "point": v})
    for src, dst, tag in ((r, s, "interior_in_second"), (s, r, "interior_in_first")):
        if src.kind is not HullKind.POINT:
            p = interior_point(src, tol)
            loc = dst.contains(p, tol)
            if loc is not Location.OUTSIDE:
                found.append({"type": tag, "location": loc.value, "point": p})
    return found


def check_lemma1(g: DiameterGraph, regions: Sequence[SphericalRegion],
                 tol: Optional[Tolerance] = None) -> VerificationReport:
    """Red regions of distinct vertices must not share any point."""
    tol = tol or g.tol
    witnesses = []
    pairs = 0
    for a in range(len(regions)):
        for b in range(a + 1, len(regions)):
            pairs += 1
            hits = region_contacts(regions[a], regions[b], tol)
            if hits:
                witnesses.append({"x": regions[a].owner, "y": regions[b].owner, "contacts": hits[:4]})
    return VerificationReport(
        "lemma1", not witnesses,
        counts={"regions": len(regions), "pairs": pairs, "violations": len(witnesses),
                # neighbour directions that are not corners of their region
                "non_extreme": sum(len(r.non_extreme) for r in regions)},
        witnesses=witnesses, tolerances=tol.as_dict(),
    )


def check_lemma2(g: DiameterGraph, regions: Sequence[SphericalRegion],
                 tol: Optional[Tolerance] = None) -> VerificationReport:
    """R(x) meets B(y) only for diameters xy, and then only at the direction y - x."""
    tol = tol or g.tol
    eps = tol.eps_geo
    blues = [antipode(r) for r in regions]
    witnesses = []
    touching = 0
    for i, red in enumerate(regions):
        x = red.owner
        for j, blue in enumerate(blues):
            y = blue.owner
            hits = region_contacts(red, blue, tol)
            if x == y or not g.has_edge(x, y):
                if hits:
                    witnesses.append({"x": x, "y": y, "edge": False, "contacts": hits[:4]})
                continue
            p = red.neighbor_dirs[y]
            stray = [h for h in hits
                     if h["type"].startswith("interior")
                     or h.get("relation") == ArcRelation.OVERLAP.value
                     or angular_distance(h["point"], p) > eps]
            missing = (red.contains(p, tol) is Location.OUTSIDE
                       or blue.contains(p, tol) is Location.OUTSIDE)
            if stray or missing:
                witnesses.append({"x": x, "y": y, "edge": True, "expected": p,
                                  "missing_contact": missing, "contacts": stray[:4]})
            else:
                touching += 1
    return VerificationReport(
        "lemma2", not witnesses,
        counts={"regions": len(regions), "ordered_pairs": len(regions) ** 2,
                "single_contacts": touching, "violations": len(witnesses)},
        witnesses=witnesses, tolerances=tol.as_dict(),
    )


@dataclass(frozen=True)
class Lemma3Instance:
    """Unit ``x`` rows, nonnegative ``lambdas`` with unit combination, and ``y``
    within distance one of every row of ``x``."""

    x: np.ndarray
    lambdas: np.ndarray
    y: np.ndarray

    @property
    def dimension(self) -> int:
        return self.x.shape[1]

    @property
    def k(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True)
class Lemma3Result:
    holds: bool
    distance: float
    combo_norm: float
    lambda_sum: float
    # |y|^2 - 2<x_i, y>, nonpositive under the hypotheses
    eq2_margins: np.ndarray
    eq1_holds: bool
    eq2_holds: bool

    @property
    def slack(self) -> float:
        return self.distance - 1.0

    def __bool__(self):
        return self.holds


def check_lemma3(inst: Lemma3Instance, tol: Tolerance = DEFAULT_TOL) -> Lemma3Result:
    x = np.asarray(inst.x, dtype=np.float64)
    lam = np.asarray(inst.lambdas, dtype=np.float64)
    y = np.asarray(inst.y, dtype=np.float64)
    if x.ndim != 2 or lam.shape != (x.shape[0],) or y.shape != (x.shape[1],):
        raise InvalidInstance("shape mismatch between x, lambdas and y")
    if np.any(np.abs(np.linalg.norm(x, axis=1) - 1.0) > tol.eps_unit):
        raise InvalidInstance("x_i must be unit vectors")
    if np.any(lam < -tol.eps_geo):
        raise InvalidInstance("lambdas must be nonnegative")
    combo = lam @ x
    combo_norm = float(np.linalg.norm(combo))
    if abs(combo_norm - 1.0) > tol.eps_unit:
        raise InvalidInstance(f"combination has norm {combo_norm}, expected 1")
    if np.any(np.linalg.norm(y - x, axis=1) > 1.0 + tol.eps_geo):
        raise InvalidInstance("y is farther than 1 from some x_i")

    distance = float(np.linalg.norm(y - combo))
    lam_sum = float(lam.sum())
    margins = float(y @ y) - 2.0 * (x @ y)
    return Lemma3Result(
        holds=distance <= 1.0 + tol.eps_geo,
        distance=distance,
        combo_norm=combo_norm,
        lambda_sum=lam_sum,
        eq2_margins=margins,
        eq1_holds=1.0 - tol.eps_unit <= combo_norm <= lam_sum + tol.eps_unit,
        eq2_holds=bool(np.all(margins <= tol.eps_geo)),
    )


# attempt budget for random_lemma3_instance
DIRECTION_ATTEMPTS = 64
RAY_BATCH = 64


def random_lemma3_instance(d: int, k: int, seed: int) -> Lemma3Instance:
    """Seeded random instance satisfying the ball-inequality hypotheses exactly.

    Directions are Gaussian; weights are exponential and rescaled so the
    combination is a unit vector. The intersection of the unit balls around
    the ``x_i`` is star-shaped from the origin: along a unit ray ``u`` it is
    the segment ``0 <= s <= 2 min_i <u, x_i>``. ``y`` is drawn on such a ray,
    with ``s`` biased toward the far end so tight cases are common. Direction
    sets that leave no ray (not in an open hemisphere) or whose combination
    nearly cancels are redrawn, at most ``DIRECTION_ATTEMPTS`` times.
    """
    if d < 2 or k < 1:
        raise ValueError("need d >= 2 and k >= 1")
    rng = np.random.default_rng([seed, d, k])
    quiet = Tolerance(eps_geo=1e-6)
    for _ in range(DIRECTION_ATTEMPTS):
        x = rng.standard_normal((k, d))
        x /= np.linalg.norm(x, axis=1)[:, None]
        lam = rng.exponential(size=k)
        rays = rng.standard_normal((RAY_BATCH, d))
        pick = rng.random()
        norm = float(np.linalg.norm(lam @ x))
        if norm < 1e-3:
            continue
        lam = lam / norm
        total = x.sum(axis=0)
        rays = total / max(float(np.linalg.norm(total)), 1e-12) + rays
        rays /= np.linalg.norm(rays, axis=1)[:, None]
        reach = 2.0 * (rays @ x.T).min(axis=1)
        good = np.flatnonzero(reach > 0)
        if len(good):
            u, r = rays[good[0]], float(reach[good[0]])
        else:
            try:
                u = hemisphere_witness(x, quiet)
            except NotInHemisphere:
                continue
            r = 2.0 * float((x @ u).min())
        y = u * (r * pick ** (1.0 / d))
        return Lemma3Instance(x=x, lambdas=lam, y=y)
    raise SamplingExhausted(f"no valid instance for d={d}, k={k}, seed={seed}")


def lemma3_suite(dims: Iterable[int] = (2, 3, 4, 5, 8), trials: int = 1000, seed: int = 0,
                 tol: Tolerance = DEFAULT_TOL, max_slack: float = 1e-9) -> VerificationReport:
    """Run ``trials`` seeded random instances per dimension; ``k`` cycles through 1..5."""
    witnesses = []
    worst = -math.inf
    per_dim = {}
    for d in dims:
        fails = 0
        for t in range(trials):
            inst = random_lemma3_instance(d, 1 + t % 5, seed * 1_000_003 + t)
            res = check_lemma3(inst, tol)
            worst = max(worst, res.slack)
            if not (res.holds and res.slack <= max_slack and res.eq1_holds and res.eq2_holds):
                fails += 1
                if len(witnesses) < 10:
                    witnesses.append({"d": d, "trial": t, "distance": res.distance,
                                      "eq1": res.eq1_holds, "eq2": res.eq2_holds})
        per_dim[str(d)] = {"trials": trials, "failures": fails}
    return VerificationReport(
        "lemma3", not witnesses,
        counts={"per_dimension": per_dim, "max_slack": worst, "slack_limit": max_slack},
        witnesses=witnesses, tolerances=tol.as_dict(),
    )
