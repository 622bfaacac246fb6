"""Pure-Python kernel backend.

Same contract as the compiled backend in ``corekernels.pyx``; results are
bit-identical.  Counting and enumeration use recursive coordinate descent
with integer k-th root bounds, so no floating point enters any count.
"""

from __future__ import annotations

import numpy as np

from ..exactnum import iroot

NAME = "pure"


def count_sphere(d: int, k: int, lam: int) -> int:
    """#{u in Z^d : sum_j |u_j|^k = lam}, exact."""
    if lam < 0:
        return 0
    memo: dict[tuple[int, int], int] = {}

    def rec(dim: int, budget: int) -> int:
        if dim == 0:
            return 1 if budget == 0 else 0
        key = (dim, budget)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = rec(dim - 1, budget)
        for c in range(1, iroot(budget, k) + 1):
            total += 2 * rec(dim - 1, budget - c**k)
        memo[key] = total
        return total

    return rec(d, lam)


def count_ball(d: int, k: int, lam: int) -> int:
    """#{u in Z^d : sum_j |u_j|^k <= lam}, exact."""
    if lam < 0:
        return 0
    memo: dict[tuple[int, int], int] = {}

    def rec(dim: int, budget: int) -> int:
        if dim == 0:
            return 1
        key = (dim, budget)
        hit = memo.get(key)
        if hit is not None:
            return hit
        total = rec(dim - 1, budget)
        for c in range(1, iroot(budget, k) + 1):
            total += 2 * rec(dim - 1, budget - c**k)
        memo[key] = total
        return total

    return rec(d, lam)


def enumerate_sphere(d: int, k: int, lam: int) -> list[tuple[int, ...]]:
    """All u in Z^d with sum_j |u_j|^k = lam, in ascending lex order."""
    if lam < 0:
        return []
    out: list[tuple[int, ...]] = []
    prefix = [0] * d

    def rec(dim: int, budget: int) -> None:
        if dim == d - 1:
            r = iroot(budget, k)
            if r**k == budget:
                if r == 0:
                    prefix[dim] = 0
                    out.append(tuple(prefix))
                else:
                    prefix[dim] = -r
                    out.append(tuple(prefix))
                    prefix[dim] = r
                    out.append(tuple(prefix))
            return
        r = iroot(budget, k)
        for c in range(-r, r + 1):
            prefix[dim] = c
            rec(dim + 1, budget - abs(c) ** k)

    rec(0, lam)
    # descent emits (-r, +r) pairs at the last coordinate; restore lex order
    out.sort()
    return out


def profile_hist(points, values, x, k: int, limit: int):
    """Histogram over s = sum_j |x_j - a_j|^k of the masses at points a.

    ``points`` is an (n, d) int array, ``values`` an (n,) int array; offsets
    with s > limit are dropped.  Returns an int64 array of length limit + 1.
    """
    hist = np.zeros(limit + 1, dtype=np.int64)
    pts = np.asarray(points)
    vals = np.asarray(values)
    n, d = pts.shape
    for i in range(n):
        s = 0
        for j in range(d):
            s += abs(int(x[j]) - int(pts[i, j])) ** k
            if s > limit:
                break
        if s <= limit:
            hist[s] += int(vals[i])
    return hist


def tuple_hist_batch(slot_points, slot_values, xs, k: int, limit: int):
    """Per-evaluation-point histogram of total offset size across slots.

    For each row x of ``xs`` and each tuple (a_1, ..., a_l) drawn from the
    slot supports, adds prod(values) at index sum_i sum_j |x_j - a_ij|^k,
    dropping tuples beyond ``limit``.  Returns int64 of shape (len(xs),
    limit + 1).  Callers guarantee the accumulated products fit in int64.
    """
    xs = np.asarray(xs)
    nx = xs.shape[0]
    out = np.zeros((nx, limit + 1), dtype=np.int64)
    for ix in range(nx):
        x = xs[ix]
        acc = profile_hist(slot_points[0], slot_values[0], x, k, limit)
        for s in range(1, len(slot_points)):
            nxt = profile_hist(slot_points[s], slot_values[s], x, k, limit)
            acc = np.convolve(acc, nxt)[: limit + 1]
        out[ix] = acc
    return out
