"""Pure-Python kernels, used when the compiled extension is unavailable.

Mirrors ``_ckernels`` function by function. The annealing loop follows the
same operation order as the compiled loop, so both backends produce the same
trajectory for the same random draws.
"""

import math

import numpy as np

DISJOINT, SHARED, TOUCH, CROSSING, OVERLAP = range(5)

_CHUNK = 512


def _sq_dists(block: np.ndarray, pts: np.ndarray) -> np.ndarray:
    # coordinate-by-coordinate accumulation keeps the summation order fixed
    diff = block[:, None, 0] - pts[None, :, 0]
    acc = diff * diff
    for c in range(1, pts.shape[1]):
        diff = block[:, None, c] - pts[None, :, c]
        acc += diff * diff
    return acc


def max_pair_sq(pts):
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    n = pts.shape[0]
    if n < 2:
        raise ValueError("need at least two points")
    best, bi, bj = -1.0, 0, 1
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        d2 = _sq_dists(pts[start:stop], pts)
        # keep only j > i
        d2[np.arange(n)[None, :] <= np.arange(start, stop)[:, None]] = -1.0
        flat = int(np.argmax(d2))
        r, c = divmod(flat, n)
        if d2[r, c] > best:
            best, bi, bj = float(d2[r, c]), start + r, c
    return best, bi, bj


def pairs_at_least(pts, thresh_sq):
    pts = np.ascontiguousarray(pts, dtype=np.float64)
    n = pts.shape[0]
    found = []
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        d2 = _sq_dists(pts[start:stop], pts)
        rows, cols = np.nonzero(d2 >= thresh_sq)
        keep = cols > rows + start
        found.append(np.column_stack([rows[keep] + start, cols[keep]]))
    if not found:
        return np.empty((0, 2), dtype=np.int64)
    out = np.concatenate(found).astype(np.int64)
    return out.reshape(-1, 2)


# pairs closer than SEPARATION * D / n are penalised so that merged points
# cannot inflate the smoothed count
SEPARATION = 0.25


def _fill_dist(pts):
    n, d = len(pts), len(pts[0])
    dist = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            acc = 0.0
            for c in range(d):
                t = pts[i][c] - pts[j][c]
                acc += t * t
            v = math.sqrt(acc)
            dist[i][j] = v
            dist[j][i] = v
    return dist


def _score(dist, n, delta):
    big = 0.0
    for i in range(n):
        row = dist[i]
        for j in range(i + 1, n):
            if row[j] > big:
                big = row[j]
    if big <= 0.0:
        return 0.0
    lo = (1.0 - delta) * big
    width = delta * big
    sep = SEPARATION * big / n
    total = 0.0
    for i in range(n):
        row = dist[i]
        for j in range(i + 1, n):
            w = (row[j] - lo) / width
            if w > 1.0:
                w = 1.0
            if w > 0.0:
                total += w
            elif row[j] < sep:
                total -= n * (1.0 - row[j] / sep)
    return total


def soft_score(pts, delta):
    pts = np.asarray(pts, dtype=np.float64).tolist()
    return _score(_fill_dist(pts), len(pts), delta)


def anneal(start, steps, movers, accept_u, t_start, t_decay, step_scale, delta):
    pts = np.asarray(start, dtype=np.float64).tolist()
    steps = np.asarray(steps, dtype=np.float64).tolist()
    movers = np.asarray(movers).tolist()
    accept_u = np.asarray(accept_u, dtype=np.float64).tolist()
    n, d = len(pts), len(pts[0])
    iters = len(movers)
    dist = _fill_dist(pts)
    score = _score(dist, n, delta)
    best = score
    best_pts = [row[:] for row in pts]
    trace = [0.0] * iters
    temp = t_start
    for it in range(iters):
        k = movers[it]
        big = 0.0
        for i in range(n):
            row = dist[i]
            for j in range(i + 1, n):
                if row[j] > big:
                    big = row[j]
        step = steps[it]
        pk = pts[k]
        trial = [pk[c] + step_scale * big * step[c] for c in range(d)]
        tdist = [row[:] for row in dist]
        for j in range(n):
            if j != k:
                pj = pts[j]
                v = 0.0
                for c in range(d):
                    v += (trial[c] - pj[c]) * (trial[c] - pj[c])
                v = math.sqrt(v)
                tdist[k][j] = v
                tdist[j][k] = v
        trial_score = _score(tdist, n, delta)
        de = trial_score - score
        if de >= 0.0 or accept_u[it] < math.exp(de / temp):
            pts[k] = trial
            dist = tdist
            score = trial_score
            if score > best:
                best = score
                best_pts = [row[:] for row in pts]
        trace[it] = best
        temp = temp * t_decay
    return (np.asarray(best_pts, dtype=np.float64), best,
            np.asarray(pts, dtype=np.float64), np.asarray(trace, dtype=np.float64))


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _norm(a):
    return math.sqrt(_dot(a, a))


def _angdist(a, b):
    return math.atan2(_norm(_cross(a, b)), _dot(a, b))


class _Arc:
    __slots__ = ("a", "b", "n", "e2", "length")

    def __init__(self, a, b):
        self.a, self.b = a, b
        n = _cross(a, b)
        nn = _norm(n)
        self.length = math.atan2(nn, _dot(a, b))
        self.n = (n[0] / nn, n[1] / nn, n[2] / nn)
        self.e2 = _cross(self.n, a)

    def angle_of(self, q):
        return math.atan2(_dot(q, self.e2), _dot(q, self.a))

    def on_arc(self, q, eps):
        t = self.angle_of(q)
        return -eps <= t <= self.length + eps

    def endpoint(self, q, eps):
        return _angdist(q, self.a) <= eps or _angdist(q, self.b) <= eps


def _contact(A, B, q, eps):
    ea, eb = A.endpoint(q, eps), B.endpoint(q, eps)
    if ea and eb:
        return SHARED
    if ea or eb:
        return TOUCH
    return CROSSING


def _classify(A, B, eps):
    axis = _cross(A.n, B.n)
    s = _norm(axis)
    if s > eps:
        for sign in (1.0, -1.0):
            q = (sign * axis[0] / s, sign * axis[1] / s, sign * axis[2] / s)
            if A.on_arc(q, eps) and B.on_arc(q, eps):
                return _contact(A, B, q, eps)
        return DISJOINT
    b1 = A.angle_of(B.a)
    if _dot(A.n, B.n) > 0:
        lo_b, hi_b = b1, b1 + B.length
    else:
        lo_b, hi_b = b1 - B.length, b1
    best = None
    for shift in (-2 * math.pi, 0.0, 2 * math.pi):
        lo = max(lo_b + shift, 0.0)
        hi = min(hi_b + shift, A.length)
        if hi >= lo - eps and (best is None or hi - lo > best[1] - best[0]):
            best = (lo, hi)
    if best is None:
        return DISJOINT
    if best[1] - best[0] > eps:
        return OVERLAP
    mid = 0.5 * (best[0] + best[1])
    cm, sm = math.cos(mid), math.sin(mid)
    q = tuple(cm * A.a[c] + sm * A.e2[c] for c in range(3))
    return _contact(A, B, q, eps)


def classify_arc_pairs(starts, ends, pairs, eps):
    starts = np.asarray(starts, dtype=np.float64).tolist()
    ends = np.asarray(ends, dtype=np.float64).tolist()
    arcs = [_Arc(tuple(s), tuple(e)) for s, e in zip(starts, ends)]
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2).tolist()
    return np.asarray([_classify(arcs[i], arcs[j], eps) for i, j in pairs], dtype=np.int8)
