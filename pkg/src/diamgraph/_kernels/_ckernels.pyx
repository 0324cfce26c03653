# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled versions of the pair scans, annealing loop and arc classifier.

Every function here has a pure-Python twin in ``_pykernels`` with the same
signature and, for the annealing loop, the same floating-point operation
order so that both backends produce identical trajectories.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, exp, atan2, cos, sin, M_PI
from cpython.mem cimport PyMem_Malloc, PyMem_Free

cnp.import_array()

cdef enum:
    DISJOINT = 0
    SHARED = 1
    TOUCH = 2
    CROSSING = 3
    OVERLAP = 4


cdef inline double _dist2(const double[:, ::1] p, Py_ssize_t i, Py_ssize_t j) noexcept nogil:
    cdef Py_ssize_t c
    cdef double acc = 0.0, t
    for c in range(p.shape[1]):
        t = p[i, c] - p[j, c]
        acc += t * t
    return acc


def max_pair_sq(const double[:, ::1] pts):
    """Largest squared pairwise distance and the first pair (i < j) attaining it."""
    cdef Py_ssize_t n = pts.shape[0], i, j
    cdef Py_ssize_t bi = 0, bj = 1
    cdef double best = -1.0, d2
    if n < 2:
        raise ValueError("need at least two points")
    with nogil:
        for i in range(n):
            for j in range(i + 1, n):
                d2 = _dist2(pts, i, j)
                if d2 > best:
                    best = d2
                    bi = i
                    bj = j
    return best, int(bi), int(bj)


def pairs_at_least(const double[:, ::1] pts, double thresh_sq):
    """All index pairs (i < j) whose squared distance is at least ``thresh_sq``."""
    cdef Py_ssize_t n = pts.shape[0], i, j
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if _dist2(pts, i, j) >= thresh_sq:
                out.append((i, j))
    if not out:
        return np.empty((0, 2), dtype=np.int64)
    return np.asarray(out, dtype=np.int64)


# must match _pykernels.SEPARATION
cdef double SEPARATION = 0.25


cdef double _score(double[:, ::1] dist, Py_ssize_t n, double delta) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double big = 0.0, lo, width, w, sep, total = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            if dist[i, j] > big:
                big = dist[i, j]
    if big <= 0.0:
        return 0.0
    lo = (1.0 - delta) * big
    width = delta * big
    sep = SEPARATION * big / n
    for i in range(n):
        for j in range(i + 1, n):
            w = (dist[i, j] - lo) / width
            if w > 1.0:
                w = 1.0
            if w > 0.0:
                total += w
            elif dist[i, j] < sep:
                total -= n * (1.0 - dist[i, j] / sep)
    return total


cdef void _fill_dist(const double[:, ::1] pts, double[:, ::1] dist) noexcept nogil:
    cdef Py_ssize_t n = pts.shape[0], i, j
    cdef double v
    for i in range(n):
        dist[i, i] = 0.0
        for j in range(i + 1, n):
            v = sqrt(_dist2(pts, i, j))
            dist[i, j] = v
            dist[j, i] = v


def soft_score(const double[:, ::1] pts, double delta):
    """Smoothed diameter-pair count: each pair weighs its position in the top delta band;
    pairs closer than SEPARATION * D / n are penalised."""
    cdef Py_ssize_t n = pts.shape[0]
    dist_arr = np.zeros((n, n), dtype=np.float64)
    cdef double[:, ::1] dist = dist_arr
    cdef double s
    with nogil:
        _fill_dist(pts, dist)
        s = _score(dist, n, delta)
    return s


def anneal(const double[:, ::1] start, const double[:, ::1] steps,
           const cnp.int64_t[::1] movers, const double[::1] accept_u,
           double t_start, double t_decay, double step_scale, double delta):
    """Metropolis annealing of the smoothed score; random draws are supplied by the caller."""
    cdef Py_ssize_t n = start.shape[0], d = start.shape[1]
    cdef Py_ssize_t iters = movers.shape[0]
    cdef Py_ssize_t it, i, j, c, k
    cdef double temp = t_start, score, trial_score, best, big, de, v

    pts_arr = np.array(start, dtype=np.float64, copy=True)
    best_arr = pts_arr.copy()
    dist_arr = np.zeros((n, n), dtype=np.float64)
    trial_dist_arr = np.zeros((n, n), dtype=np.float64)
    trial_row_arr = np.zeros(d, dtype=np.float64)
    trace_arr = np.zeros(iters, dtype=np.float64)
    cdef double[:, ::1] pts = pts_arr
    cdef double[:, ::1] best_pts = best_arr
    cdef double[:, ::1] dist = dist_arr
    cdef double[:, ::1] tdist = trial_dist_arr
    cdef double[::1] trial = trial_row_arr
    cdef double[::1] trace = trace_arr

    with nogil:
        _fill_dist(pts, dist)
        score = _score(dist, n, delta)
        best = score
        for it in range(iters):
            k = movers[it]
            big = 0.0
            for i in range(n):
                for j in range(i + 1, n):
                    if dist[i, j] > big:
                        big = dist[i, j]
            for c in range(d):
                trial[c] = pts[k, c] + step_scale * big * steps[it, c]
            for i in range(n):
                for j in range(n):
                    tdist[i, j] = dist[i, j]
            for j in range(n):
                if j != k:
                    v = 0.0
                    for c in range(d):
                        v += (trial[c] - pts[j, c]) * (trial[c] - pts[j, c])
                    v = sqrt(v)
                    tdist[k, j] = v
                    tdist[j, k] = v
            trial_score = _score(tdist, n, delta)
            de = trial_score - score
            if de >= 0.0 or accept_u[it] < exp(de / temp):
                for c in range(d):
                    pts[k, c] = trial[c]
                for i in range(n):
                    for j in range(n):
                        dist[i, j] = tdist[i, j]
                score = trial_score
                if score > best:
                    best = score
                    for i in range(n):
                        for c in range(d):
                            best_pts[i, c] = pts[i, c]
            trace[it] = best
            temp = temp * t_decay
    return best_arr, best, pts_arr, trace_arr


cdef inline void _cross(const double* a, const double* b, double* out) noexcept nogil:
    out[0] = a[1] * b[2] - a[2] * b[1]
    out[1] = a[2] * b[0] - a[0] * b[2]
    out[2] = a[0] * b[1] - a[1] * b[0]


cdef inline double _dot(const double* a, const double* b) noexcept nogil:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


cdef inline double _norm(const double* a) noexcept nogil:
    return sqrt(_dot(a, a))


cdef inline double _angdist(const double* a, const double* b) noexcept nogil:
    cdef double t[3]
    _cross(a, b, t)
    return atan2(_norm(t), _dot(a, b))


cdef struct Arc:
    double a[3]
    double b[3]
    double n[3]
    double e2[3]
    double length


cdef void _make_arc(const double[:, ::1] s, const double[:, ::1] e, Py_ssize_t i, Arc* arc) noexcept nogil:
    cdef int c
    cdef double nn
    for c in range(3):
        arc.a[c] = s[i, c]
        arc.b[c] = e[i, c]
    _cross(arc.a, arc.b, arc.n)
    nn = _norm(arc.n)
    arc.length = atan2(nn, _dot(arc.a, arc.b))
    for c in range(3):
        arc.n[c] = arc.n[c] / nn
    _cross(arc.n, arc.a, arc.e2)


cdef inline double _angle_of(const Arc* arc, const double* q) noexcept nogil:
    return atan2(_dot(q, arc.e2), _dot(q, arc.a))


cdef inline bint _on_arc(const Arc* arc, const double* q, double eps) noexcept nogil:
    cdef double t = _angle_of(arc, q)
    return -eps <= t <= arc.length + eps


cdef inline bint _endpoint(const Arc* arc, const double* q, double eps) noexcept nogil:
    return _angdist(q, arc.a) <= eps or _angdist(q, arc.b) <= eps


cdef int _contact(const Arc* A, const Arc* B, const double* q, double eps) noexcept nogil:
    cdef bint ea = _endpoint(A, q, eps)
    cdef bint eb = _endpoint(B, q, eps)
    if ea and eb:
        return SHARED
    if ea or eb:
        return TOUCH
    return CROSSING


cdef int _classify(const Arc* A, const Arc* B, double eps) noexcept nogil:
    cdef double axis[3]
    cdef double q[3]
    cdef double s, b1, lo_b, hi_b, lo, hi, best_lo = 0.0, best_hi = -1.0, mid
    cdef double shifts[3]
    cdef int c, k, sign
    cdef bint found = False
    _cross(A.n, B.n, axis)
    s = _norm(axis)
    if s > eps:
        for sign in range(2):
            for c in range(3):
                q[c] = axis[c] / s if sign == 0 else -axis[c] / s
            if _on_arc(A, q, eps) and _on_arc(B, q, eps):
                return _contact(A, B, q, eps)
        return DISJOINT
    b1 = _angle_of(A, B.a)
    if _dot(A.n, B.n) > 0:
        lo_b = b1
        hi_b = b1 + B.length
    else:
        lo_b = b1 - B.length
        hi_b = b1
    shifts[0] = -2 * M_PI
    shifts[1] = 0.0
    shifts[2] = 2 * M_PI
    for k in range(3):
        lo = lo_b + shifts[k]
        if lo < 0.0:
            lo = 0.0
        hi = hi_b + shifts[k]
        if hi > A.length:
            hi = A.length
        if hi >= lo - eps and (not found or hi - lo > best_hi - best_lo):
            best_lo = lo
            best_hi = hi
            found = True
    if not found:
        return DISJOINT
    if best_hi - best_lo > eps:
        return OVERLAP
    mid = 0.5 * (best_lo + best_hi)
    for c in range(3):
        q[c] = cos(mid) * A.a[c] + sin(mid) * A.e2[c]
    return _contact(A, B, q, eps)


def classify_arc_pairs(const double[:, ::1] starts, const double[:, ::1] ends,
                       const cnp.int64_t[:, ::1] pairs, double eps):
    """Relation code for each listed arc pair (0 disjoint, 1 shared endpoint,
    2 touch, 3 proper crossing, 4 overlap)."""
    cdef Py_ssize_t m = starts.shape[0], k, npairs = pairs.shape[0]
    codes_arr = np.zeros(npairs, dtype=np.int8)
    cdef cnp.int8_t[::1] codes = codes_arr
    cdef Arc* arcs
    arcs = <Arc*> PyMem_Malloc(max(m, 1) * sizeof(Arc))
    if arcs == NULL:
        raise MemoryError()
    try:
        with nogil:
            for k in range(m):
                _make_arc(starts, ends, k, &arcs[k])
            for k in range(npairs):
                codes[k] = _classify(&arcs[pairs[k, 0]], &arcs[pairs[k, 1]], eps)
    finally:
        PyMem_Free(arcs)
    return codes_arr
