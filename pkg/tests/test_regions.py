import dataclasses

import numpy as np
import pytest

from diamgraph import (build_diameter_graph, gen_random, gen_spindle, gen_tetrahedron,
                       prune_low_degree)
from diamgraph.errors import DegenerateRegion, InvalidInstance, SamplingExhausted
from diamgraph.geometry import HullKind, Location
from diamgraph.regions import (Color, Lemma3Instance, antipode, build_region, build_regions,
                               check_lemma1, check_lemma2, check_lemma3, interior_point,
                               lemma3_suite, random_lemma3_instance, region_contacts)


def core_of(ps):
    core, _ = prune_low_degree(build_diameter_graph(ps))
    return core


@pytest.fixture(scope="module")
def tet():
    return core_of(gen_tetrahedron())


def test_tetrahedron_regions_are_triangles(tet):
    for r in build_regions(tet):
        assert r.kind is HullKind.POLYGON and len(r.vertices) == 3
        assert r.color is Color.RED and r.non_extreme == ()
        for y, u in r.neighbor_dirs.items():
            expect = tet.coords(y) - tet.coords(r.owner)
            assert np.allclose(u, expect / np.linalg.norm(expect))


def test_spindle_region_kinds():
    g = core_of(gen_spindle(8))
    kinds = [r.kind for r in build_regions(g)]
    # apexes see a fan of directions; a circle point sees only the two apexes
    assert kinds[:2] == [HullKind.POLYGON] * 2
    assert all(k is HullKind.ARC for k in kinds[3:-1])


def test_degree_one_vertex_has_no_region():
    g = build_diameter_graph(gen_random(10, seed=3))
    with pytest.raises(DegenerateRegion):
        build_region(g, 0 if g.degree(0) < 2 else next(v for v in range(g.n) if g.degree(v) < 2))


def test_antipode_negates_and_keeps_orientation(tet):
    r = build_region(tet, 0)
    b = antipode(r)
    assert b.color is Color.BLUE and b.owner == r.owner
    assert {tuple(np.round(-v, 12)) for v in r.vertices} == {tuple(np.round(v, 12)) for v in b.vertices}
    assert np.allclose(b.vertices[0], -r.vertices[0])
    v = b.vertices
    assert float(np.dot(np.cross(v[0], v[1]), v[2])) > 0
    assert np.allclose(antipode(b).vertices, r.vertices)


def test_interior_point(tet):
    for r in build_regions(tet):
        p = interior_point(r)
        assert r.contains(p) is Location.INTERIOR
        assert antipode(r).contains(-p) is Location.INTERIOR


def test_lemma1_and_lemma2_on_tetrahedron(tet):
    regions = build_regions(tet)
    rep1 = check_lemma1(tet, regions)
    rep2 = check_lemma2(tet, regions)
    assert rep1.passed and rep1.counts["pairs"] == 6 and rep1.counts["non_extreme"] == 0
    assert rep2.passed and rep2.counts["single_contacts"] == 12


@pytest.mark.parametrize("n", [4, 7, 12])
def test_lemmas_on_spindles(n):
    g = core_of(gen_spindle(n))
    regions = build_regions(g)
    assert check_lemma1(g, regions).passed
    rep = check_lemma2(g, regions)
    assert rep.passed and rep.counts["single_contacts"] == 2 * g.m


def test_lemma1_negative_control(tet):
    regions = build_regions(tet)
    clone = dataclasses.replace(regions[0], owner=1)
    rep = check_lemma1(tet, [regions[0], clone] + regions[2:])
    assert not rep.passed
    assert rep.witnesses[0]["x"] == 0 and rep.witnesses[0]["y"] == 1


def test_lemma1_reports_non_extreme_directions(tet):
    regions = build_regions(tet)
    flagged = dataclasses.replace(regions[0], non_extreme=(1,))
    rep = check_lemma1(tet, [flagged] + regions[1:])
    assert rep.passed and rep.counts["non_extreme"] == 1


def test_lemma2_negative_control(tet):
    regions = build_regions(tet)
    # give vertex 1 the antipode of vertex 0's region: R(1) then meets B(0)
    # along a whole polygon rather than in a single point
    fake = dataclasses.replace(antipode(regions[0]), owner=1, color=Color.RED,
                               neighbor_dirs=regions[1].neighbor_dirs)
    rep = check_lemma2(tet, [regions[0], fake] + regions[2:])
    assert not rep.passed


def test_region_contacts_separated_caps():
    g = core_of(gen_tetrahedron())
    r = build_region(g, 0)
    assert region_contacts(r, antipode(r)) == []


# --- ball inequality ---------------------------------------------------------

def test_lemma3_hand_examples():
    x = np.array([[1.0, 0.0]])
    res = check_lemma3(Lemma3Instance(x, np.array([1.0]), np.array([0.5, 0.0])))
    assert res and res.distance == pytest.approx(0.5) and res.eq1_holds and res.eq2_holds
    # y on the boundary of the unit ball around x: tight case
    res = check_lemma3(Lemma3Instance(x, np.array([1.0]), np.array([1.0, 1.0]) / np.sqrt(2)
                                      + np.array([1.0, 0.0]) * (1 - 1 / np.sqrt(2))))
    assert res.holds
    x = np.array([[1.0, 0.0], [0.0, 1.0]])
    lam = np.array([1.0, 1.0]) / np.sqrt(2)
    res = check_lemma3(Lemma3Instance(x, lam, np.array([0.5, 0.5])))
    assert res.holds and res.lambda_sum == pytest.approx(np.sqrt(2))


def test_lemma3_rejects_bad_instances():
    x = np.array([[1.0, 0.0]])
    with pytest.raises(InvalidInstance):
        check_lemma3(Lemma3Instance(2 * x, np.array([0.5]), np.zeros(2)))
    with pytest.raises(InvalidInstance):
        check_lemma3(Lemma3Instance(x, np.array([0.5]), np.zeros(2)))
    with pytest.raises(InvalidInstance):
        check_lemma3(Lemma3Instance(x, np.array([1.0]), np.array([3.0, 0.0])))
    with pytest.raises(InvalidInstance):
        check_lemma3(Lemma3Instance(x, np.array([-1.0]), np.zeros(2)))
    with pytest.raises(InvalidInstance):
        check_lemma3(Lemma3Instance(x, np.array([1.0]), np.zeros(3)))


def test_lemma3_distance_matches_direct_formula():
    for d in (2, 3, 5):
        for k in (1, 3, 5):
            inst = random_lemma3_instance(d, k, seed=7)
            combo = sum(l * xi for l, xi in zip(inst.lambdas, inst.x))
            direct = float(np.sqrt(sum((a - b) ** 2 for a, b in zip(inst.y, combo))))
            assert check_lemma3(inst).distance == pytest.approx(direct, rel=1e-14)


def test_random_instances_are_reproducible_and_valid():
    a = random_lemma3_instance(4, 3, seed=11)
    b = random_lemma3_instance(4, 3, seed=11)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
    assert np.all(np.linalg.norm(a.y - a.x, axis=1) <= 1.0)
    assert abs(np.linalg.norm(a.lambdas @ a.x) - 1) < 1e-12


def test_sampling_budget(monkeypatch):
    import diamgraph.regions as regions

    monkeypatch.setattr(regions, "DIRECTION_ATTEMPTS", 0)
    with pytest.raises(SamplingExhausted):
        regions.random_lemma3_instance(3, 2, seed=0)


def test_lemma3_suite_small():
    rep = lemma3_suite((2, 3, 8), trials=200, seed=5)
    assert rep.passed and rep.counts["max_slack"] <= 1e-9
