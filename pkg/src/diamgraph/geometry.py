"""Vector arithmetic and spherical predicates shared by the rest of the package.

All comparisons against zero or one route through a :class:`Tolerance`, so the
numerical slack used anywhere in a computation can be read off a single object.
Vectors are plain ``float64`` numpy arrays.
"""

from __future__ import annotations

import enum
import functools
import math
import os
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArc, NearZeroVector, NotInHemisphere

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "as_vector",
    "normalize",
    "angular_distance",
    "cross3",
    "GreatArc",
    "ArcRelation",
    "ArcIntersection",
    "arc_intersect",
    "HullKind",
    "SphericalHull",
    "spherical_hull",
    "hemisphere_witness",
    "Location",
    "point_in_region",
    "tangent_frame",
    "slerp",
]

_EPS_MAX = 1e-3
_ENV_VAR = "DIAMGRAPH_EPS"


@dataclass(frozen=True)
class Tolerance:
    """Numerical slack used by every geometric predicate.

    Parameters
    ----------
    eps_unit : float
        Allowed deviation of a norm from one.
    eps_diam : float
        Relative slack when deciding that a distance equals the diameter.
    eps_geo : float
        Angular slack for point-on-arc, coincidence and rank decisions.
    """

    eps_unit: float = 1e-9
    eps_diam: float = 1e-9
    eps_geo: float = 1e-9

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not (0.0 < value <= _EPS_MAX) or not math.isfinite(value):
                raise ValueError(f"{name} must lie in (0, {_EPS_MAX}], got {value!r}")

    def as_dict(self) -> dict:
        return asdict(self)

    def replace(self, **changes) -> "Tolerance":
        values = self.as_dict()
        values.update({k: v for k, v in changes.items() if v is not None})
        return Tolerance(**values)

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "Tolerance":
        """Build a tolerance with precedence explicit override > environment > default.

        ``DIAMGRAPH_EPS`` holds either one number applied to all three knobs or
        a comma separated list such as ``eps_diam=1e-8,eps_geo=1e-10``.
        """
        environ = os.environ if environ is None else environ
        values = cls().as_dict()
        raw = environ.get(_ENV_VAR, "").strip()
        if raw:
            if "=" in raw:
                for item in raw.split(","):
                    key, _, val = item.partition("=")
                    key = key.strip()
                    if key not in values:
                        raise ValueError(f"unknown tolerance key {key!r} in {_ENV_VAR}")
                    values[key] = float(val)
            else:
                eps = float(raw)
                values = {k: eps for k in values}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


DEFAULT_TOL = Tolerance()


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError(f"expected a 1-d coordinate array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("vector has non-finite coordinates")
    return arr


def normalize(v, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Return ``v / |v|``; raise :class:`NearZeroVector` when ``|v| <= eps_geo``."""
    arr = as_vector(v)
    norm = float(np.linalg.norm(arr))
    if norm <= tol.eps_geo:
        raise NearZeroVector(f"cannot normalize vector of norm {norm:.3g}")
    out = arr / norm
    # one refinement step pulls the norm to within an ulp of 1
    return out / np.linalg.norm(out)


def cross3(a, b) -> np.ndarray:
    """Cross product of two 3-vectors (much cheaper than ``np.cross`` for single pairs)."""
    a0, a1, a2 = a.tolist() if isinstance(a, np.ndarray) else a
    b0, b1, b2 = b.tolist() if isinstance(b, np.ndarray) else b
    return np.array([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])


def angular_distance(a, b) -> float:
    """Angle in radians between two 3-vectors, stable for tiny and near-pi angles."""
    a0, a1, a2 = a.tolist() if isinstance(a, np.ndarray) else a
    b0, b1, b2 = b.tolist() if isinstance(b, np.ndarray) else b
    c0, c1, c2 = a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0
    return math.atan2(math.sqrt(c0 * c0 + c1 * c1 + c2 * c2), a0 * b0 + a1 * b1 + a2 * b2)


def slerp(a, b, count: int) -> np.ndarray:
    """``count`` points evenly spaced along the minor arc from ``a`` to ``b``."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    theta = angular_distance(a, b)
    ts = np.linspace(0.0, 1.0, count)
    if theta < 1e-12:
        return np.repeat(a[None, :], count, axis=0)
    s = math.sin(theta)
    wa = np.sin((1.0 - ts) * theta) / s
    wb = np.sin(ts * theta) / s
    return wa[:, None] * a[None, :] + wb[:, None] * b[None, :]


def tangent_frame(w) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal ``(e1, e2)`` perpendicular to unit ``w`` with ``e1 x e2 = w``."""
    w = np.asarray(w, dtype=np.float64)
    axis = np.zeros(3)
    axis[int(np.argmin(np.abs(w)))] = 1.0
    e1 = cross3(axis, w)
    e1 /= np.linalg.norm(e1)
    e2 = cross3(w, e1)
    return e1, e2


def _check_unit(v: np.ndarray, tol: Tolerance, what: str) -> None:
    if v.shape != (3,):
        raise InvalidArc(f"{what} must be a 3-vector, got shape {v.shape}")
    if abs(float(np.linalg.norm(v)) - 1.0) > tol.eps_unit:
        raise InvalidArc(f"{what} is not a unit vector")


class GreatArc:
    """Minor great-circle arc from ``a`` to ``b`` on the unit sphere."""

    __slots__ = ("a", "b", "normal", "e2", "length")

    def __init__(self, a, b, tol: Tolerance = DEFAULT_TOL):
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        _check_unit(a, tol, "arc start")
        _check_unit(b, tol, "arc end")
        if np.linalg.norm(a + b) <= tol.eps_geo:
            raise InvalidArc("antipodal endpoints do not determine an arc")
        n = cross3(a, b)
        nn = float(np.linalg.norm(n))
        if nn <= tol.eps_geo and float(np.dot(a, b)) > 0:
            raise InvalidArc("arc endpoints coincide")
        self.a = a
        self.b = b
        self.normal = n / nn
        self.e2 = cross3(self.normal, a)
        self.length = math.atan2(nn, float(np.dot(a, b)))

    def angle_of(self, q) -> float:
        """Signed angle of ``q`` measured from ``a`` along the arc's circle."""
        return math.atan2(float(np.dot(q, self.e2)), float(np.dot(q, self.a)))

    def point_at(self, angle: float) -> np.ndarray:
        return math.cos(angle) * self.a + math.sin(angle) * self.e2

    def reversed(self, tol: Tolerance = DEFAULT_TOL) -> "GreatArc":
        return GreatArc(self.b, self.a, tol)

    def __repr__(self):
        return f"GreatArc({self.a.tolist()} -> {self.b.tolist()})"


class ArcRelation(str, enum.Enum):
    DISJOINT = "disjoint"
    SHARED_ENDPOINT = "shared_endpoint"
    # an endpoint of one arc lies in the relative interior of the other
    TOUCH = "touch"
    PROPER_CROSSING = "proper_crossing"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class ArcIntersection:
    kind: ArcRelation
    point: Optional[np.ndarray] = None
    subarc: Optional[tuple] = None

    def __bool__(self):
        return self.kind is not ArcRelation.DISJOINT


def _endpoint_hit(q, arc: GreatArc, eps: float) -> bool:
    return angular_distance(q, arc.a) <= eps or angular_distance(q, arc.b) <= eps


def _on_arc(q, arc: GreatArc, eps: float) -> bool:
    t = arc.angle_of(q)
    return -eps <= t <= arc.length + eps


def _contact(q, A: GreatArc, B: GreatArc, eps: float) -> ArcIntersection:
    end_a = _endpoint_hit(q, A, eps)
    end_b = _endpoint_hit(q, B, eps)
    if end_a and end_b:
        return ArcIntersection(ArcRelation.SHARED_ENDPOINT, q)
    if end_a or end_b:
        return ArcIntersection(ArcRelation.TOUCH, q)
    return ArcIntersection(ArcRelation.PROPER_CROSSING, q)


def arc_intersect(A: GreatArc, B: GreatArc, tol: Tolerance = DEFAULT_TOL) -> ArcIntersection:
    """Classify how two minor arcs meet.

    Returns one of disjoint, shared endpoint, touch (endpoint of one arc on
    the interior of the other), proper crossing (interiors meet in one point)
    or overlap (a common sub-arc of positive length).
    """
    eps = tol.eps_geo
    axis = cross3(A.normal, B.normal)
    s = float(np.linalg.norm(axis))
    if s > eps:
        p = axis / s
        for q in (p, -p):
            if _on_arc(q, A, eps) and _on_arc(q, B, eps):
                return _contact(q, A, B, eps)
        return ArcIntersection(ArcRelation.DISJOINT)

    # both arcs lie on one great circle: compare angular intervals in A's frame
    b1 = A.angle_of(B.a)
    if float(np.dot(A.normal, B.normal)) > 0:
        lo_b, hi_b = b1, b1 + B.length
    else:
        lo_b, hi_b = b1 - B.length, b1
    best = None
    for shift in (-2 * math.pi, 0.0, 2 * math.pi):
        lo = max(0.0, lo_b + shift)
        hi = min(A.length, hi_b + shift)
        if hi >= lo - eps and (best is None or hi - lo > best[1] - best[0]):
            best = (lo, hi)
    if best is None:
        return ArcIntersection(ArcRelation.DISJOINT)
    lo, hi = best
    if hi - lo > eps:
        start, end = A.point_at(lo), A.point_at(hi)
        return ArcIntersection(ArcRelation.OVERLAP, A.point_at(0.5 * (lo + hi)), (start, end))
    return _contact(A.point_at(0.5 * (lo + hi)), A, B, eps)


class HullKind(str, enum.Enum):
    POINT = "point"
    ARC = "arc"
    POLYGON = "polygon"


@dataclass(frozen=True)
class SphericalHull:
    """Spherical convex hull of a direction set inside an open hemisphere.

    ``vertices`` are the extreme directions; for polygons they run
    counterclockwise seen from outside the sphere. ``indices`` point back into
    the input list and ``witness`` is a unit vector with positive inner
    product against every input.
    """

    kind: HullKind
    vertices: np.ndarray
    witness: np.ndarray
    indices: tuple

    @functools.cached_property
    def edge_normals(self) -> np.ndarray:
        """Unit inward normals of the polygon edges (counterclockwise order)."""
        v = self.vertices
        normals = np.cross(v, np.roll(v, -1, axis=0))
        return normals / np.linalg.norm(normals, axis=1)[:, None]

    def __iter__(self):
        # allows ``kind, vertices = spherical_hull(...)``
        return iter((self.kind, self.vertices))

    def edges(self) -> list[tuple[np.ndarray, np.ndarray]]:
        v = self.vertices
        if self.kind is HullKind.ARC:
            return [(v[0], v[1])]
        if self.kind is HullKind.POLYGON:
            return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]
        return []


def hemisphere_witness(dirs: np.ndarray, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Unit ``w`` with ``<w, u> > eps_geo`` for every row ``u``, or raise NotInHemisphere."""
    total = dirs.sum(axis=0)
    norm = float(np.linalg.norm(total))
    if norm > tol.eps_geo:
        w = total / norm
        if float(np.min(dirs @ w)) > tol.eps_geo:
            return w
    from scipy.optimize import linprog

    m, d = dirs.shape
    # maximise t subject to <u_i, w> >= t, |w_k| <= 1
    c = np.zeros(d + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-dirs, np.ones((m, 1))])
    bounds = [(-1.0, 1.0)] * d + [(None, 1.0)]
    res = linprog(c, A_ub=a_ub, b_ub=np.zeros(m), bounds=bounds, method="highs")
    if res.status == 0 and -res.fun > tol.eps_geo:
        w = res.x[:d] / np.linalg.norm(res.x[:d])
        if float(np.min(dirs @ w)) > tol.eps_geo:
            return w
    raise NotInHemisphere("directions are not contained in an open hemisphere")


def _cross2(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def _planar_hull(pts: np.ndarray, eps: float) -> list[int]:
    """Monotone chain; returns ccw indices, dropping collinear points."""
    order = sorted(range(len(pts)), key=lambda i: (pts[i][0], pts[i][1]))

    def turns_left(o, a, b):
        da = np.hypot(*(pts[a] - pts[o]))
        db = np.hypot(*(pts[b] - pts[o]))
        return _cross2(pts[o], pts[a], pts[b]) > eps * da * db

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and not turns_left(lower[-2], lower[-1], i):
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and not turns_left(upper[-2], upper[-1], i):
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def spherical_hull(directions, tol: Tolerance = DEFAULT_TOL) -> SphericalHull:
    """Spherical convex hull of unit directions lying in an open hemisphere.

    The hull kind follows the linear rank of the direction set (1: point,
    2: arc, 3: polygon). Polygons are computed by central projection onto the
    tangent plane at a hemisphere witness, which maps great circles to lines.
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=np.float64))
    if dirs.shape[0] == 0:
        raise ValueError("spherical_hull needs at least one direction")
    if dirs.shape[1] != 3:
        raise ValueError("spherical_hull works on the 2-sphere in R^3")
    norms = np.linalg.norm(dirs, axis=1)
    if np.any(np.abs(norms - 1.0) > tol.eps_unit):
        raise ValueError("spherical_hull inputs must be unit vectors")

    w = hemisphere_witness(dirs, tol)
    sv = np.linalg.svd(dirs, compute_uv=False)
    rank = int(np.count_nonzero(sv > tol.eps_geo))

    if rank <= 1:
        return SphericalHull(HullKind.POINT, w[None, :].copy(), w, (0,))

    e1, e2 = tangent_frame(w)
    depth = dirs @ w
    planar = np.column_stack([(dirs @ e1) / depth, (dirs @ e2) / depth])

    if rank == 3:
        idx = _planar_hull(planar, tol.eps_geo)
        if len(idx) >= 3:
            return SphericalHull(HullKind.POLYGON, dirs[idx].copy(), w, tuple(idx))

    centred = planar - planar.mean(axis=0)
    _, _, vt = np.linalg.svd(centred, full_matrices=False)
    t = centred @ vt[0]
    ends = sorted({int(np.argmin(t)), int(np.argmax(t))})
    return SphericalHull(HullKind.ARC, dirs[ends].copy(), w, tuple(ends))


class Location(str, enum.Enum):
    OUTSIDE = "outside"
    BOUNDARY = "boundary"
    INTERIOR = "interior"


def point_in_region(p, hull: SphericalHull, tol: Tolerance = DEFAULT_TOL,
                    arc_interior: bool = False) -> Location:
    """Locate unit ``p`` relative to a spherical hull.

    For arc regions the relative interior is reported as ``BOUNDARY`` unless
    ``arc_interior`` is set, in which case it is ``INTERIOR``.
    """
    p = np.asarray(p, dtype=np.float64)
    eps = tol.eps_geo
    verts = hull.vertices
    if hull.kind is HullKind.POINT:
        return Location.BOUNDARY if angular_distance(p, verts[0]) <= eps else Location.OUTSIDE

    if hull.kind is HullKind.ARC:
        arc = GreatArc(verts[0], verts[1], tol)
        if abs(float(np.dot(p, arc.normal))) > eps or not _on_arc(p, arc, eps):
            return Location.OUTSIDE
        if _endpoint_hit(p, arc, eps):
            return Location.BOUNDARY
        return Location.INTERIOR if arc_interior else Location.BOUNDARY

    if float(np.dot(p, hull.witness)) <= 0.0:
        return Location.OUTSIDE
    s = hull.edge_normals @ p
    lowest = float(s.min())
    if lowest < -eps:
        return Location.OUTSIDE
    if lowest > eps:
        return Location.INTERIOR
    return Location.BOUNDARY
