import numpy as np
import pytest

from diamgraph import _kernels, analyze, gen_spindle
from diamgraph.geometry import GreatArc, arc_intersect

BACKENDS = _kernels.backends()
compiled = pytest.mark.skipif("cython" not in BACKENDS, reason="compiled extension not built")


def random_points(n, seed, d=3):
    return np.ascontiguousarray(np.random.default_rng(seed).normal(size=(n, d)))


def test_backend_selection():
    assert _kernels.BACKEND in BACKENDS
    assert set(BACKENDS) >= {"python"}


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_pair_scans_match_numpy(name):
    k = BACKENDS[name]
    pts = random_points(300, 1)
    d2 = ((pts[:, None] - pts[None]) ** 2).sum(axis=2)
    best, i, j = k.max_pair_sq(pts)
    assert best == pytest.approx(d2.max(), rel=1e-15) and i < j
    thresh = 0.9 * d2.max()
    expect = {(a, b) for a, b in zip(*np.nonzero(np.triu(d2 >= thresh, 1)))}
    assert {tuple(p) for p in k.pairs_at_least(pts, thresh).tolist()} == expect


@compiled
def test_backends_agree_exactly():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    for seed in range(5):
        pts = random_points(50 + 40 * seed, seed)
        assert py.max_pair_sq(pts) == cy.max_pair_sq(pts)
        t = 0.8 * py.max_pair_sq(pts)[0]
        assert np.array_equal(py.pairs_at_least(pts, t), cy.pairs_at_least(pts, t))
        assert py.soft_score(pts, 0.05) == pytest.approx(cy.soft_score(pts, 0.05), rel=1e-14)


@compiled
def test_anneal_is_bit_identical():
    py, cy = BACKENDS["python"], BACKENDS["cython"]
    rng = np.random.default_rng(3)
    start = random_points(7, 4)
    steps = rng.standard_normal((3000, 3))
    movers = rng.integers(0, 7, 3000).astype(np.int64)
    accept = rng.random(3000)
    a = py.anneal(start, steps, movers, accept, 0.5, 0.998, 0.05, 0.05)
    b = cy.anneal(start, steps, movers, accept, 0.5, 0.998, 0.05, 0.05)
    assert np.array_equal(a[0], b[0]) and a[1] == b[1]
    assert np.array_equal(a[2], b[2]) and np.array_equal(a[3], b[3])


@pytest.mark.parametrize("name", sorted(BACKENDS))
def test_arc_codes_match_scalar_predicate(name):
    k = BACKENDS[name]
    dr = analyze(gen_spindle(9)).drawing
    starts, ends, _ = dr.subarcs()
    rng = np.random.default_rng(0)
    extra = rng.normal(size=(60, 3))
    extra /= np.linalg.norm(extra, axis=1)[:, None]
    starts = np.ascontiguousarray(np.vstack([starts, extra[:30]]))
    ends = np.ascontiguousarray(np.vstack([ends, extra[30:]]))
    m = len(starts)
    pairs = np.ascontiguousarray(np.array([(a, b) for a in range(m) for b in range(a + 1, m)],
                                          dtype=np.int64))
    codes = k.classify_arc_pairs(starts, ends, pairs, 1e-9)
    for (a, b), code in zip(pairs.tolist(), codes.tolist()):
        expect = arc_intersect(GreatArc(starts[a], ends[a]), GreatArc(starts[b], ends[b])).kind
        assert _kernels.ARC_CODES[code] == expect.value, (a, b)


def test_pure_env_forces_python_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, DIAMGRAPH_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import diamgraph; print(diamgraph.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True).stdout
    assert out.strip() == "python"


def test_benchmark_script_runs():
    import subprocess
    import sys
    from pathlib import Path

    script = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"
    out = subprocess.run([sys.executable, str(script), "--quick", "--repeat", "1"],
                         capture_output=True, text=True, check=True).stdout
    assert "anneal" in out and "compute_diameter_fast n=100000" in out
