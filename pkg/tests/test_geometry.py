import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from diamgraph.errors import InvalidArc, NearZeroVector, NotInHemisphere
from diamgraph.geometry import (DEFAULT_TOL, ArcRelation, GreatArc, HullKind, Location,
                                Tolerance, angular_distance, arc_intersect, cross3,
                                hemisphere_witness, normalize, point_in_region, slerp,
                                spherical_hull, tangent_frame)

X, Y, Z = np.eye(3)


def unit(*v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


coords = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)
vec3 = st.tuples(coords, coords, coords).filter(lambda v: sum(c * c for c in v) > 1e-2)


# --- tolerance ---------------------------------------------------------------

def test_tolerance_defaults_and_bounds():
    assert Tolerance().as_dict() == {"eps_unit": 1e-9, "eps_diam": 1e-9, "eps_geo": 1e-9}
    with pytest.raises(ValueError):
        Tolerance(eps_geo=0.0)
    with pytest.raises(ValueError):
        Tolerance(eps_diam=1e-2)
    with pytest.raises(ValueError):
        Tolerance(eps_unit=float("nan"))


def test_tolerance_env_precedence():
    env = {"DIAMGRAPH_EPS": "1e-7"}
    assert Tolerance.from_env(env).eps_geo == 1e-7
    t = Tolerance.from_env({"DIAMGRAPH_EPS": "eps_diam=1e-8"}, eps_diam=1e-6)
    assert t.eps_diam == 1e-6 and t.eps_geo == 1e-9
    assert Tolerance.from_env({"DIAMGRAPH_EPS": "eps_geo=1e-10"}).eps_geo == 1e-10
    assert Tolerance.from_env({}) == DEFAULT_TOL
    with pytest.raises(ValueError):
        Tolerance.from_env({"DIAMGRAPH_EPS": "bogus=1"})


# --- vectors -----------------------------------------------------------------

def test_normalize_examples():
    assert np.allclose(normalize([3, 0, 4]), [0.6, 0, 0.8])
    with pytest.raises(NearZeroVector):
        normalize([0, 0, 0])
    with pytest.raises(NearZeroVector):
        normalize([1e-12, 0, 0])


@given(vec3)
def test_normalize_is_unit(v):
    assert abs(np.linalg.norm(normalize(v)) - 1.0) <= 1e-15


@given(vec3, vec3)
def test_cross3_matches_numpy(a, b):
    assert np.allclose(cross3(np.array(a), np.array(b)), np.cross(a, b), atol=1e-15)


def test_angular_distance_extremes():
    assert angular_distance(X, X) == 0.0
    assert angular_distance(X, -X) == pytest.approx(math.pi)
    assert angular_distance(X, Y) == pytest.approx(math.pi / 2)
    tiny = unit(1, 1e-10, 0)
    assert angular_distance(X, tiny) == pytest.approx(1e-10, rel=1e-6)


def test_tangent_frame_orientation():
    for w in (X, -Z, unit(1, 2, 3)):
        e1, e2 = tangent_frame(w)
        assert np.allclose(np.cross(e1, e2), w)
        assert abs(e1 @ w) < 1e-15 and abs(e2 @ w) < 1e-15


def test_slerp_endpoints_and_spacing():
    pts = slerp(X, Y, 5)
    assert np.allclose(pts[0], X) and np.allclose(pts[-1], Y)
    gaps = [angular_distance(pts[i], pts[i + 1]) for i in range(4)]
    assert np.allclose(gaps, math.pi / 8)


# --- arcs --------------------------------------------------------------------

def test_arc_rejects_bad_endpoints():
    with pytest.raises(InvalidArc):
        GreatArc(X, -X)
    with pytest.raises(InvalidArc):
        GreatArc(X, X)
    with pytest.raises(InvalidArc):
        GreatArc(2 * X, Y)


def test_arc_relations():
    A = GreatArc(unit(1, -1, 0), unit(1, 1, 0))
    assert arc_intersect(A, GreatArc(unit(1, 0, -1), unit(1, 0, 1))).kind is ArcRelation.PROPER_CROSSING
    assert arc_intersect(A, GreatArc(unit(1, 1, 0), Z)).kind is ArcRelation.SHARED_ENDPOINT
    assert arc_intersect(A, GreatArc(X, Z)).kind is ArcRelation.TOUCH
    assert arc_intersect(A, GreatArc(X, Y)).kind is ArcRelation.OVERLAP
    assert arc_intersect(A, GreatArc(unit(-1, 0, -1), unit(-1, 0, 1))).kind is ArcRelation.DISJOINT
    # same circle, far apart
    assert arc_intersect(GreatArc(X, unit(1, 1, 0)), GreatArc(-X, unit(-1, -1, 0))).kind \
        is ArcRelation.DISJOINT
    # same circle, meeting end to end
    assert arc_intersect(GreatArc(X, Y), GreatArc(Y, -X)).kind is ArcRelation.SHARED_ENDPOINT


def test_crossing_point_is_on_both_arcs():
    A = GreatArc(unit(1, -1, 0.2), unit(1, 1, 0.1))
    B = GreatArc(unit(1, 0.1, -1), unit(1, 0.05, 1))
    hit = arc_intersect(A, B)
    assert hit.kind is ArcRelation.PROPER_CROSSING
    assert abs(hit.point @ A.normal) < 1e-12 and abs(hit.point @ B.normal) < 1e-12


@settings(max_examples=200)
@given(vec3, vec3, vec3, vec3)
def test_arc_intersect_symmetric(a, b, c, d):
    a, b, c, d = (unit(*v) for v in (a, b, c, d))
    for p, q in ((a, b), (c, d)):
        assume(1e-3 < angular_distance(p, q) < math.pi - 1e-3)
    A, B = GreatArc(a, b), GreatArc(c, d)
    r1, r2 = arc_intersect(A, B), arc_intersect(B, A)
    assert r1.kind is r2.kind
    assert arc_intersect(A, B).kind is arc_intersect(A.reversed(), B).kind
    if r1.point is not None and r1.kind is not ArcRelation.OVERLAP:
        assert angular_distance(r1.point, r2.point) < 1e-7


# --- hulls -------------------------------------------------------------------

def test_hull_kinds():
    kind, verts = spherical_hull([X])
    assert kind is HullKind.POINT
    kind, verts = spherical_hull([X, unit(1, 1, 0), Y])
    assert kind is HullKind.ARC
    assert {tuple(np.round(v, 12)) for v in verts} == {tuple(X), tuple(Y)}
    h = spherical_hull([X, Y, Z, unit(1, 1, 1)])
    assert h.kind is HullKind.POLYGON and len(h.vertices) == 3
    assert sorted(h.indices) == [0, 1, 2]


def test_polygon_is_counterclockwise_from_outside():
    h = spherical_hull([X, Y, Z])
    v = h.vertices
    assert float(np.dot(np.cross(v[0], v[1]), v[2])) > 0


def test_hull_needs_open_hemisphere():
    with pytest.raises(NotInHemisphere):
        spherical_hull([X, -X])
    with pytest.raises(NotInHemisphere):
        hemisphere_witness(np.array([X, Y, Z, -unit(1, 1, 1)]))


def test_witness_via_linear_program():
    # the plain sum fails here; the LP fallback still finds a witness
    dirs = np.array([unit(-1, 0.02, 0.01)] + [unit(1, 0, 0.01)] * 30)
    total = dirs.sum(axis=0)
    assert np.min(dirs @ total) < 0
    w = hemisphere_witness(dirs)
    assert np.all(dirs @ w > 0)


@settings(max_examples=100)
@given(st.lists(vec3, min_size=3, max_size=12))
def test_hull_contains_inputs_and_is_minimal(raw):
    dirs = np.array([unit(abs(v[0]) + 0.5, v[1], v[2]) for v in raw])
    h = spherical_hull(dirs)
    for d in dirs:
        assert point_in_region(d, h, arc_interior=True) is not Location.OUTSIDE
    if h.kind is HullKind.POLYGON:
        # every hull vertex is extreme: dropping it loses it from the hull
        for k in range(len(h.vertices)):
            rest = np.delete(h.vertices, k, axis=0)
            if len(rest) >= 3:
                hk = spherical_hull(rest)
                assert point_in_region(h.vertices[k], hk) is Location.OUTSIDE


def test_point_in_region_locations():
    h = spherical_hull([X, Y, Z])
    assert point_in_region(unit(1, 1, 1), h) is Location.INTERIOR
    assert point_in_region(unit(1, 1, 0), h) is Location.BOUNDARY
    assert point_in_region(X, h) is Location.BOUNDARY
    assert point_in_region(unit(-1, 1, 1), h) is Location.OUTSIDE
    assert point_in_region(-unit(1, 1, 1), h) is Location.OUTSIDE
    arc = spherical_hull([X, Y])
    mid = unit(1, 1, 0)
    assert point_in_region(mid, arc) is Location.BOUNDARY
    assert point_in_region(mid, arc, arc_interior=True) is Location.INTERIOR
    assert point_in_region(unit(1, 1, 0.1), arc) is Location.OUTSIDE
    assert point_in_region(-mid, arc) is Location.OUTSIDE
