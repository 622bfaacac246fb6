import random
from fractions import Fraction

import pytest

from slicemax.exactnum import PowerValue
from slicemax.gridfn import GridFunction
from slicemax.operators import Box, MaximalConfig, NormalizationMode, linear_maximal, maximal_function
from slicemax.primes import Progression
from slicemax.slicing import (
    annulus_literal_ratio_probe,
    grid_product,
    slice_rhs,
    verify_domination,
)
from slicemax.surfaces import SurfaceSpec


def rand_grid(rng, d, size, radius=4, vmax=9):
    pts = {
        tuple(rng.randint(-radius, radius) for _ in range(d)): rng.randint(0, vmax)
        for _ in range(size)
    }
    g = GridFunction(d, pts)
    return g if g else GridFunction.delta(d)


def as_pv(v):
    return v if isinstance(v, PowerValue) else PowerValue(Fraction(v))


def test_slice_rhs_delta_example():
    d1 = GridFunction.delta(1)
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    box = Box((-5,), (5,))
    rhs = slice_rhs(spec, [d1, d1], MaximalConfig.upto(200), box)
    assert rhs.value((0,)) == 1
    for x in range(1, 6):
        assert rhs.value((x,)).as_fraction() == Fraction(1, x * x)


def test_slice_rhs_zero_slot():
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    rhs = slice_rhs(spec, [GridFunction.delta(1), GridFunction.zero(1)],
                    MaximalConfig.upto(50), Box((-3,), (3,)))
    assert len(rhs) == 0


def test_slice_rhs_degenerate_single_slot():
    d1 = GridFunction.delta(1)
    spec = SurfaceSpec("ball", d=1, ell=1, k=2)
    cfg = MaximalConfig.upto(100)
    box = Box((-4,), (4,))
    rhs = slice_rhs(spec, [d1], cfg, box)
    lhs = maximal_function(spec, [d1], cfg, box)
    for x in box.points():
        assert as_pv(lhs.value(x)).compare(as_pv(rhs.value(x))) == 0


def test_domination_delta_example():
    d1 = GridFunction.delta(1)
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    cfg = MaximalConfig.upto(200)
    box = Box((-5,), (5,))
    rep = verify_domination(spec, [d1, d1], cfg, box)
    assert rep.applicable and rep.dominated and rep.violations == 0
    assert rep.max_violation is not None and rep.max_violation <= 0
    lhs = maximal_function(spec, [d1, d1], cfg, box)
    rhs = slice_rhs(spec, [d1, d1], cfg, box)
    assert lhs.value((3,)).as_fraction() == Fraction(1, 18)
    assert rhs.value((3,)).as_fraction() == Fraction(1, 9)


def test_domination_degree_k_ball():
    # the cumulative slicing argument is degree-agnostic
    rng = random.Random(27)
    for k in (1, 3, 4):
        spec = SurfaceSpec("ball", d=2, ell=2, k=k)
        fs = [rand_grid(rng, 2, 4) for _ in range(2)]
        rep = verify_domination(spec, fs, MaximalConfig.upto(60), Box((-3, -3), (3, 3)))
        assert rep.applicable and rep.dominated, (k, rep.witness)


def test_domination_random_sphere_01_grids():
    rng = random.Random(21)
    spec = SurfaceSpec("sphere", d=2, ell=2, k=2)
    for _ in range(6):
        fs = [rand_grid(rng, 2, 8, radius=4, vmax=1) for _ in range(2)]
        rep = verify_domination(spec, fs, MaximalConfig.upto(100), Box((-4, -4), (4, 4)))
        assert rep.applicable and rep.dominated, rep.witness


def test_domination_slot_symmetry():
    rng = random.Random(22)
    spec = SurfaceSpec("ball", d=2, ell=2, k=2)
    fs = [rand_grid(rng, 2, 5) for _ in range(2)]
    cfg = MaximalConfig.upto(60)
    box = Box((-4, -4), (4, 4))
    for lead in (0, 1):
        rep = verify_domination(spec, fs, cfg, box, lead_slot=lead)
        assert rep.applicable and rep.dominated


def test_domination_witness_reproducible():
    rng = random.Random(23)
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    fs = [rand_grid(rng, 1, 4) for _ in range(2)]
    cfg = MaximalConfig.upto(80)
    box = Box((-6,), (6,))
    rep = verify_domination(spec, fs, cfg, box)
    assert rep.dominated
    if rep.max_violation is not None and rep.witness is not None:
        lhs = maximal_function(spec, fs, cfg, box)
        rhs = slice_rhs(spec, fs, cfg, box)
        lv, rv = lhs.value(rep.witness), rhs.value(rep.witness)
        lf = as_pv(lv).as_fraction() if as_pv(lv).is_rational() else None
        rf = as_pv(rv).as_fraction() if as_pv(rv).is_rational() else None
        if lf is not None and rf is not None:
            assert lf - rf == rep.max_violation


def test_trilinear_induction_consistency():
    # M(f1) * [bilinear slice of (f2, f3)] also dominates the trilinear maximal
    rng = random.Random(24)
    spec3 = SurfaceSpec("ball", d=1, ell=3, k=2)
    spec2 = SurfaceSpec("ball", d=1, ell=2, k=2)
    fs = [rand_grid(rng, 1, 3) for _ in range(3)]
    cfg = MaximalConfig.upto(60)
    box = Box((-5,), (5,))
    lhs = maximal_function(spec3, fs, cfg, box)
    lead = linear_maximal("hl_ball", fs[0], MaximalConfig.upto(60), k=2, box=box)
    inner = slice_rhs(spec2, fs[1:], cfg, box)
    rhs = grid_product(lead, inner)
    for x in box.points():
        assert as_pv(lhs.value(x)).compare(as_pv(rhs.value(x))) <= 0


def test_sphere_needs_d_at_least_k():
    spec = SurfaceSpec("sphere", d=2, ell=2, k=3)
    rep = verify_domination(spec, [GridFunction.delta(2)] * 2, MaximalConfig.upto(20))
    assert not rep.applicable
    assert "d >= k" in rep.reason


def test_exact_count_normalization_not_applicable():
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    cfg = MaximalConfig.upto(20, NormalizationMode.exact_count())
    rep = verify_domination(spec, [GridFunction.delta(1)] * 2, cfg)
    assert not rep.applicable


def test_prime_preconditions():
    bare = SurfaceSpec("prime_sphere", d=2, ell=2, k=2)
    rep = verify_domination(bare, [GridFunction.delta(2)] * 2, MaximalConfig.upto(50))
    assert not rep.applicable and "progressions" in rep.reason

    bad = SurfaceSpec(
        "prime_sphere", d=2, ell=2, k=2,
        progressions=(Progression(5, 24), Progression(5, 24)),
        ambient=Progression(5, 24),
    )
    cfg = MaximalConfig.upto(100, progression=Progression(5, 24))
    rep = verify_domination(bad, [GridFunction.delta(2)] * 2, cfg)
    assert not rep.applicable and "sumset" in rep.reason


def test_prime_domination_weighted_and_exact():
    rng = random.Random(25)
    spec = SurfaceSpec(
        "prime_sphere", d=2, ell=2, k=3,
        progressions=(Progression(0, 2), Progression(0, 2)),
        ambient=Progression(0, 2),
    )
    cfg = MaximalConfig.upto(260, progression=Progression(0, 2))
    box = Box((-2, -2), (8, 8))
    for _ in range(4):
        fs = [rand_grid(rng, 2, 6) for _ in range(2)]
        exact = verify_domination(spec, fs, cfg, box, weighted=False)
        assert exact.applicable and exact.dominated
        weighted = verify_domination(spec, fs, cfg, box, weighted=True)
        assert weighted.applicable
        assert weighted.rel_violation_float is None or weighted.rel_violation_float <= 1e-9


def test_annulus_literal_probe_runs():
    rng = random.Random(26)
    spec = SurfaceSpec("annulus", d=3, ell=2, k=2, theta=Fraction(1, 2))
    fs = [rand_grid(rng, 3, 4, radius=2) for _ in range(2)]
    ratio = annulus_literal_ratio_probe(spec, fs, MaximalConfig.upto(30), Box((-2,) * 3, (2,) * 3))
    assert ratio >= 0.0


def test_domination_report_serializable():
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    rep = verify_domination(spec, [GridFunction.delta(1)] * 2, MaximalConfig.upto(30),
                            Box((-2,), (2,)))
    row = rep.summary_row()
    assert row["dominated"] is True
    assert isinstance(row["max_violation"], str)


def test_domination_point_rows_on_request():
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    rep = verify_domination(spec, [GridFunction.delta(1)] * 2, MaximalConfig.upto(30),
                            Box((-2,), (2,)), collect_points=True)
    rows = rep.detail_rows()
    assert len(rows) == 5  # every box point carries some mass here
    by_x = {r["x"]: r for r in rows}
    assert by_x["0"]["lhs"] == "1"
    assert all(float(r["diff_float"]) <= 0 for r in rows)
