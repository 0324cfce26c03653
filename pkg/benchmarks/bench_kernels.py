"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 3] [--quick]

Prints one row per kernel with the best wall time of each backend and the
speedup, then the time of ``compute_diameter_fast`` on 10^5 points.
"""

import argparse
import sys
import timeit

import numpy as np

from diamgraph import PointSet, _kernels, analyze, compute_diameter_fast, gen_spindle


def cases(quick: bool):
    rng = np.random.default_rng(0)
    n = 800 if quick else 3000
    pts = np.ascontiguousarray(rng.normal(size=(n, 3)))
    thresh = 0.8 * _kernels.max_pair_sq(pts)[0]
    small = np.ascontiguousarray(rng.normal(size=(30, 3)))
    iters = 5_000 if quick else 50_000
    steps = rng.standard_normal((iters, 3))
    movers = rng.integers(0, 8, iters).astype(np.int64)
    accept = rng.random(iters)
    start = np.ascontiguousarray(rng.normal(size=(8, 3)))
    starts, ends, _ = analyze(gen_spindle(20 if quick else 40)).drawing.subarcs()
    m = len(starts)
    pairs = np.ascontiguousarray(np.array([(a, b) for a in range(m) for b in range(a + 1, m)],
                                          dtype=np.int64))
    starts, ends = np.ascontiguousarray(starts), np.ascontiguousarray(ends)
    return [
        (f"max_pair_sq n={n}", "max_pair_sq", (pts,)),
        (f"pairs_at_least n={n}", "pairs_at_least", (pts, thresh)),
        ("soft_score n=30", "soft_score", (small, 0.05)),
        (f"anneal n=8 iters={iters}", "anneal",
         (start, steps, movers, accept, 0.5, 0.9995, 0.05, 0.05)),
        (f"classify_arc_pairs pairs={len(pairs)}", "classify_arc_pairs",
         (starts, ends, pairs, 1e-9)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    args = ap.parse_args(argv)

    backends = _kernels.backends()
    names = sorted(backends)
    print(f"active backend: {_kernels.BACKEND}")
    header = f"{'kernel':40s}" + "".join(f"{b:>12s}" for b in names)
    if len(names) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    for label, func, fargs in cases(args.quick):
        times = {}
        for b in names:
            f = getattr(backends[b], func)
            times[b] = min(timeit.repeat(lambda: f(*fargs), number=1, repeat=args.repeat))
        row = f"{label:40s}" + "".join(f"{times[b]:11.4f}s" for b in names)
        if len(names) == 2:
            row += f"{times['python'] / times['cython']:9.1f}x"
        print(row)

    big = PointSet(np.random.default_rng(1).random((100_000, 3)))
    t = min(timeit.repeat(lambda: compute_diameter_fast(big), number=1, repeat=args.repeat))
    print(f"compute_diameter_fast n=100000: {t:.3f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
