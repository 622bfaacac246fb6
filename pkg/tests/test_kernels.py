"""Backend parity: the compiled core and the pure fallback agree bit-for-bit."""

import random

import numpy as np
import pytest

from slicemax import kernels


requires_compiled = pytest.mark.skipif(
    "compiled" not in kernels.BACKENDS, reason="compiled kernels not built"
)


@pytest.fixture
def both_backends():
    if "compiled" not in kernels.BACKENDS:
        pytest.skip("compiled kernels not built")
    return kernels.BACKENDS["pure"], kernels.BACKENDS["compiled"]


def test_backend_selection_roundtrip():
    original = kernels.get_backend()
    kernels.set_backend("pure")
    assert kernels.get_backend() == "pure"
    kernels.set_backend(original)
    with pytest.raises(ValueError):
        kernels.set_backend("gpu")


def test_counts_agree(both_backends):
    pure, compiled = both_backends
    for d in (1, 2, 3, 4):
        for k in (2, 3, 4):
            for lam in (0, 1, 5, 37, 120):
                assert pure.count_sphere(d, k, lam) == compiled.count_sphere(d, k, lam)
                assert pure.count_ball(d, k, lam) == compiled.count_ball(d, k, lam)


def test_enumeration_agrees(both_backends):
    pure, compiled = both_backends
    for d in (1, 2, 3):
        for k in (2, 3):
            for lam in range(25):
                assert pure.enumerate_sphere(d, k, lam) == compiled.enumerate_sphere(d, k, lam)


def test_profiles_agree(both_backends):
    pure, compiled = both_backends
    rng = random.Random(3)
    for _ in range(20):
        d = rng.choice([1, 2, 3])
        n = rng.randint(1, 10)
        pts = np.array([[rng.randint(-5, 5) for _ in range(d)] for _ in range(n)],
                       dtype=np.int64)
        vals = np.array([rng.randint(0, 9) for _ in range(n)], dtype=np.int64)
        x = tuple(rng.randint(-5, 5) for _ in range(d))
        limit = rng.randint(1, 80)
        k = rng.choice([2, 3])
        a = pure.profile_hist(pts, vals, x, k, limit)
        b = compiled.profile_hist(pts, vals, x, k, limit)
        assert np.array_equal(a, b)


def test_tuple_hist_batch_agrees(both_backends):
    pure, compiled = both_backends
    rng = random.Random(4)
    for nslots in (1, 2, 3, 4):
        d = rng.choice([1, 2])
        slot_pts, slot_vals = [], []
        for _ in range(nslots):
            n = rng.randint(1, 6)
            slot_pts.append(np.array([[rng.randint(-4, 4) for _ in range(d)]
                                      for _ in range(n)], dtype=np.int64))
            slot_vals.append(np.array([rng.randint(0, 9) for _ in range(n)],
                                      dtype=np.int64))
        xs = np.array([[rng.randint(-4, 4) for _ in range(d)] for _ in range(12)],
                      dtype=np.int64)
        limit = 60
        a = pure.tuple_hist_batch(slot_pts, slot_vals, xs, 2, limit)
        b = compiled.tuple_hist_batch(slot_pts, slot_vals, xs, 2, limit)
        assert np.array_equal(a, b)


@requires_compiled
def test_operator_results_backend_independent():
    # a full domination suite gives identical rows on both backends
    from slicemax.suites import domination_suite

    original = kernels.get_backend()
    try:
        kernels.set_backend("compiled")
        rows_c = domination_suite("ball_bilinear", 4, seed=99)
        kernels.set_backend("pure")
        rows_p = domination_suite("ball_bilinear", 4, seed=99)
    finally:
        kernels.set_backend(original)
    assert rows_c == rows_p
