#!/usr/bin/env python3
"""Benchmark the compiled kernel core against the pure-Python fallback.

Times the three hot kernels (descent counting, sphere enumeration, radial
pair histograms) and one end-to-end domination instance on each backend,
verifying agreement as it goes.

Run:  python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

import numpy as np

from slicemax import kernels


def timeit(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_counts(backend, repeat):
    return timeit(lambda: backend.count_ball(4, 2, 4000), repeat)


def bench_enumeration(backend, repeat):
    return timeit(lambda: len(backend.enumerate_sphere(3, 2, 2019)), repeat)


def bench_histograms(backend, repeat):
    rng = random.Random(1)
    d, n, limit = 3, 10, 120
    slot_pts = [
        np.array([[rng.randint(-6, 6) for _ in range(d)] for _ in range(n)], dtype=np.int64)
        for _ in range(2)
    ]
    slot_vals = [
        np.array([rng.randint(0, 9) for _ in range(n)], dtype=np.int64) for _ in range(2)
    ]
    xs = np.array([[x, y, z] for x in range(-8, 9) for y in range(-8, 9) for z in range(-8, 9)],
                  dtype=np.int64)

    def run():
        return int(backend.tuple_hist_batch(slot_pts, slot_vals, xs, 2, limit).sum())

    return timeit(run, repeat)


def bench_domination(backend_name, repeat):
    from slicemax.suites import domination_suite

    kernels.set_backend(backend_name)

    def run():
        rows = domination_suite("ball_bilinear", 3, seed=5)
        assert all(r["dominated"] for r in rows)
        return rows

    return timeit(run, repeat)


BENCHES = [
    ("count_ball(4, 2, 4000)", bench_counts),
    ("enumerate_sphere(3, 2, 2019)", bench_enumeration),
    ("pair histograms, 17^3 points", bench_histograms),
    ("domination suite, 3 instances", None),  # handled separately
]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    names = sorted(kernels.BACKENDS)
    if "compiled" not in names:
        print("compiled backend not built; timing the pure backend only")
    original = kernels.get_backend()

    print(f"{'kernel':<34} " + " ".join(f"{n:>12}" for n in names) + "   speedup")
    try:
        for label, bench in BENCHES[:3]:
            times = {}
            results = {}
            for name in names:
                times[name], results[name] = bench(kernels.BACKENDS[name], args.repeat)
            assert len({repr(r) for r in results.values()}) == 1, f"{label}: backends disagree"
            row = f"{label:<34} " + " ".join(f"{times[n] * 1e3:>10.2f}ms" for n in names)
            if len(names) == 2:
                row += f"   {times['pure'] / times['compiled']:>6.1f}x"
            print(row)
        times = {}
        for name in names:
            times[name], _ = bench_domination(name, args.repeat)
        row = f"{'domination suite, 3 instances':<34} " + " ".join(
            f"{times[n] * 1e3:>10.2f}ms" for n in names)
        if len(names) == 2:
            row += f"   {times['pure'] / times['compiled']:>6.1f}x"
        print(row)
    finally:
        kernels.set_backend(original)


if __name__ == "__main__":
    main()
