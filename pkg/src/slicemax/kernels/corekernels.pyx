# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend: lattice counting, enumeration, radial histograms.

Bit-identical to ``purekernels``; callers guarantee all intermediate counts
and mass products fit in int64 and fall back to the pure backend otherwise.
"""

import numpy as np

NAME = "compiled"


cdef long long _ipow(long long base, int k) noexcept:
    cdef long long out = 1
    cdef int i
    for i in range(k):
        out *= base
    return out


cdef long long _iroot(long long n, int k) noexcept:
    # floor(n ** (1/k)) for n >= 0, k >= 1; float seed, integer correction
    if n <= 0:
        return 0
    if k == 1:
        return n
    cdef long long r = <long long> (n ** (1.0 / k))
    if r < 0:
        r = 0
    while r > 0 and _ipow(r, k) > n:
        r -= 1
    while _ipow(r + 1, k) <= n:
        r += 1
    return r


def count_sphere(int d, int k, object lam_obj):
    """#{u in Z^d : sum_j |u_j|^k = lam}, exact (int64 range)."""
    cdef long long lam = lam_obj
    if lam < 0:
        return 0
    cdef long long[:, ::1] table = np.zeros((d + 1, lam + 1), dtype=np.int64)
    table[0, 0] = 1
    cdef int dim
    cdef long long b, c, r, acc
    for dim in range(1, d + 1):
        for b in range(lam + 1):
            acc = table[dim - 1, b]
            r = _iroot(b, k)
            for c in range(1, r + 1):
                acc += 2 * table[dim - 1, b - _ipow(c, k)]
            table[dim, b] = acc
    return int(table[d, lam])


def count_ball(int d, int k, object lam_obj):
    """#{u in Z^d : sum_j |u_j|^k <= lam}, exact (int64 range)."""
    cdef long long lam = lam_obj
    if lam < 0:
        return 0
    cdef long long[:, ::1] table = np.ones((d + 1, lam + 1), dtype=np.int64)
    cdef int dim
    cdef long long b, c, r, acc
    for dim in range(1, d + 1):
        for b in range(lam + 1):
            acc = table[dim - 1, b]
            r = _iroot(b, k)
            for c in range(1, r + 1):
                acc += 2 * table[dim - 1, b - _ipow(c, k)]
            table[dim, b] = acc
    return int(table[d, lam])


def enumerate_sphere(int d, int k, object lam_obj):
    """All u in Z^d with sum_j |u_j|^k = lam, ascending lex order."""
    cdef long long lam = lam_obj
    if lam < 0:
        return []
    cdef long long[::1] prefix = np.zeros(d, dtype=np.int64)
    out: list = []
    _enum_rec(d, k, 0, lam, prefix, out)
    out.sort()
    return out


cdef void _enum_rec(int d, int k, int dim, long long budget,
                    long long[::1] prefix, list out):
    cdef long long r, c
    cdef int j
    if dim == d - 1:
        r = _iroot(budget, k)
        if _ipow(r, k) == budget:
            if r == 0:
                prefix[dim] = 0
                out.append(tuple(prefix[j] for j in range(d)))
            else:
                prefix[dim] = -r
                out.append(tuple(prefix[j] for j in range(d)))
                prefix[dim] = r
                out.append(tuple(prefix[j] for j in range(d)))
        return
    r = _iroot(budget, k)
    for c in range(-r, r + 1):
        prefix[dim] = c
        _enum_rec(d, k, dim + 1, budget - _ipow(c if c >= 0 else -c, k), prefix, out)


def profile_hist(object points, object values, object x, int k, object limit_obj):
    """Histogram over s = sum_j |x_j - a_j|^k of the masses at points a."""
    cdef long long limit = limit_obj
    pts_arr = np.ascontiguousarray(points, dtype=np.int64)
    vals_arr = np.ascontiguousarray(values, dtype=np.int64)
    x_arr = np.ascontiguousarray(x, dtype=np.int64)
    hist_arr = np.zeros(limit + 1, dtype=np.int64)
    cdef long long[:, ::1] pts = pts_arr
    cdef long long[::1] vals = vals_arr
    cdef long long[::1] xv = x_arr
    cdef long long[::1] hist = hist_arr
    cdef Py_ssize_t n = pts.shape[0]
    cdef int d = pts.shape[1]
    cdef Py_ssize_t i
    cdef int j
    cdef long long s, diff
    for i in range(n):
        s = 0
        for j in range(d):
            diff = xv[j] - pts[i, j]
            if diff < 0:
                diff = -diff
            s += _ipow(diff, k)
            if s > limit:
                break
        if s <= limit:
            hist[s] += vals[i]
    return hist_arr


def tuple_hist_batch(object slot_points, object slot_values, object xs,
                     int k, object limit_obj):
    """Per-evaluation-point histogram of total offset size across slots."""
    cdef long long limit = limit_obj
    cdef int nslots = len(slot_points)
    xs_arr = np.ascontiguousarray(xs, dtype=np.int64)
    cdef long long[:, ::1] xv = xs_arr
    cdef Py_ssize_t nx = xv.shape[0]
    cdef int d = xv.shape[1]
    out_arr = np.zeros((nx, limit + 1), dtype=np.int64)
    cdef long long[:, ::1] out = out_arr

    pts_list = [np.ascontiguousarray(p, dtype=np.int64) for p in slot_points]
    vals_list = [np.ascontiguousarray(v, dtype=np.int64) for v in slot_values]

    if nslots > 3:
        # rare: compose pairwise via convolution on top of the 3-slot core
        acc = tuple_hist_batch(pts_list[:3], vals_list[:3], xs_arr, k, limit)
        for extra in range(3, nslots):
            nxt = tuple_hist_batch(pts_list[extra : extra + 1],
                                   vals_list[extra : extra + 1],
                                   xs_arr, k, limit)
            acc = np.stack([
                np.convolve(acc[i], nxt[i])[: limit + 1] for i in range(nx)
            ])
        out_arr[:, :] = acc
        return out_arr

    # scratch: per-slot filtered (s, weight) pairs for the current x
    cdef long long[:, ::1] p0 = pts_list[0]
    cdef long long[::1] v0 = vals_list[0]
    cdef long long[:, ::1] p1 = pts_list[1] if nslots > 1 else pts_list[0]
    cdef long long[::1] v1 = vals_list[1] if nslots > 1 else vals_list[0]
    cdef long long[:, ::1] p2 = pts_list[2] if nslots > 2 else pts_list[0]
    cdef long long[::1] v2 = vals_list[2] if nslots > 2 else vals_list[0]

    cdef Py_ssize_t max_n = max(p.shape[0] for p in pts_list)
    s_buf_arr = np.zeros((3, max_n), dtype=np.int64)
    w_buf_arr = np.zeros((3, max_n), dtype=np.int64)
    cdef long long[:, ::1] s_buf = s_buf_arr
    cdef long long[:, ::1] w_buf = w_buf_arr
    cdef Py_ssize_t[3] filled

    cdef Py_ssize_t ix, i, a, b, c
    cdef int j, slot
    cdef long long s, diff, tot, w
    cdef long long[:, ::1] cur_pts
    cdef long long[::1] cur_vals

    for ix in range(nx):
        for slot in range(nslots):
            if slot == 0:
                cur_pts, cur_vals = p0, v0
            elif slot == 1:
                cur_pts, cur_vals = p1, v1
            else:
                cur_pts, cur_vals = p2, v2
            filled[slot] = 0
            for i in range(cur_pts.shape[0]):
                s = 0
                for j in range(d):
                    diff = xv[ix, j] - cur_pts[i, j]
                    if diff < 0:
                        diff = -diff
                    s += _ipow(diff, k)
                    if s > limit:
                        break
                if s <= limit:
                    s_buf[slot, filled[slot]] = s
                    w_buf[slot, filled[slot]] = cur_vals[i]
                    filled[slot] += 1
        if nslots == 1:
            for a in range(filled[0]):
                out[ix, s_buf[0, a]] += w_buf[0, a]
        elif nslots == 2:
            for a in range(filled[0]):
                for b in range(filled[1]):
                    tot = s_buf[0, a] + s_buf[1, b]
                    if tot <= limit:
                        out[ix, tot] += w_buf[0, a] * w_buf[1, b]
        else:
            for a in range(filled[0]):
                for b in range(filled[1]):
                    tot = s_buf[0, a] + s_buf[1, b]
                    if tot > limit:
                        continue
                    w = w_buf[0, a] * w_buf[1, b]
                    for c in range(filled[2]):
                        if tot + s_buf[2, c] <= limit:
                            out[ix, tot + s_buf[2, c]] += w * w_buf[2, c]
    return out_arr
