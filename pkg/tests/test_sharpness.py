from fractions import Fraction as F

import pytest

from slicemax.exactnum import PowerValue
from slicemax.exponents import critical_r
from slicemax.gridfn import GridFunction
from slicemax.operators import MaximalConfig, NormalizationMode, multilinear_average
from slicemax.primes import Progression
from slicemax.sharpness import (
    classify_family_series,
    classify_power_sum,
    delta_partial_sum,
    delta_term,
    estimate_critical_exponent,
    run_sharpness,
)
from slicemax.surfaces import SurfaceSpec, power_law_exponent


def test_partial_sum_examples():
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    assert delta_partial_sum(spec, F(1), 2) == F(5, 4)
    assert delta_partial_sum(spec, F(1), 0) == 0


def test_partial_sum_monotone_in_R():
    spec = SurfaceSpec("sphere", d=2, ell=2, k=2)
    sums = [delta_partial_sum(spec, F(3, 4), R) for R in (2, 4, 8, 16)]
    assert all(b >= a for a, b in zip(sums, sums[1:]))


def test_partial_sum_nonincreasing_in_r():
    spec = SurfaceSpec("ball", d=2, ell=2, k=2)
    a = delta_partial_sum(spec, F(1, 2), 6)
    b = delta_partial_sum(spec, F(3, 4), 6)
    assert float(b) <= float(a)


@pytest.mark.parametrize("family,kwargs", [
    ("ball", {}),
    ("sphere", {}),
    ("annulus", {"theta": F(1, 2)}),
])
def test_terms_match_operator_lower_bound(family, kwargs):
    # each series term is the r-th power of the actual average of deltas at
    # the height ell*|x|^k, evaluated at x
    d = 2
    spec = SurfaceSpec(family, d=d, ell=2, k=2, **kwargs)
    deltas = [GridFunction.delta(d)] * 2
    phi = power_law_exponent(spec)
    r = F(2)  # integral exponent keeps both sides exact
    total = F(0)
    R = 3
    for x0 in range(-R, R + 1):
        for x1 in range(-R, R + 1):
            s = x0 * x0 + x1 * x1
            if not 0 < s <= R * R:
                continue
            lam = 2 * s
            avg = multilinear_average(spec, deltas, lam, NormalizationMode.power_law(), (x0, x1))
            avg = avg if isinstance(avg, PowerValue) else PowerValue(F(avg))
            term = delta_term(spec, s, r)
            assert (avg * avg).as_fraction() == term  # r = 2 squares the average
            total += term
    assert total == delta_partial_sum(spec, r, R)


def test_prime_terms_filter_inadmissible_heights():
    spec = SurfaceSpec(
        "prime_sphere", d=2, ell=2, k=2,
        progressions=(Progression(2, 8), Progression(2, 8)),
        ambient=Progression(4, 8),
    )
    # s with 2s not in 4 mod 8 contributes nothing
    assert delta_term(spec, 1, F(1)) == 0
    assert delta_term(spec, 2, F(1)) != 0


def test_classify_power_sum_examples():
    assert classify_power_sum(5, F(8)).verdict == "convergent"
    assert classify_power_sum(5, F(5)).verdict == "divergent"
    assert classify_power_sum(1, F(1, 2)).verdict == "divergent"


@pytest.mark.parametrize("d", [1, 2, 3, 5])
def test_classify_power_sum_matches_exact_criterion(d):
    for offset in (F(-2), F(-1), F(-1, 2), F(-1, 4), F(1, 4), F(1, 2), F(1), F(2)):
        s = d + offset
        if s <= 0:
            continue
        verdict = classify_power_sum(d, s).verdict
        want = "convergent" if s > d else "divergent"
        assert verdict == want, (d, s, verdict)


def test_classifier_needs_a_ladder():
    with pytest.raises(ValueError):
        classify_power_sum(2, F(3), radii=(4, 8))


def test_bracket_examples():
    cases = [
        (SurfaceSpec("ball", d=1, ell=2, k=2), [F(2, 5), F(1, 2), F(5, 8), F(3, 4)]),
        (SurfaceSpec("ball", d=3, ell=2, k=2), [F(2, 5), F(9, 20), F(1, 2), F(11, 20), F(3, 5)]),
        (SurfaceSpec("sphere", d=5, ell=2, k=2), [F(9, 20), F(11, 20), F(5, 8), F(7, 10), F(4, 5)]),
        (SurfaceSpec("annulus", d=5, ell=2, theta=F(1, 2)), [F(9, 20), F(1, 2), F(5, 9), F(31, 50), F(7, 10)]),
    ]
    for spec, grid in cases:
        rc = critical_r(spec.family, spec.d, spec.k, spec.ell, spec.theta)
        bracket = estimate_critical_exponent(spec, grid)
        assert bracket.contains(rc), (spec.family, bracket)
        assert bracket.width <= F(1, 5)


def test_bracket_one_sided():
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    bracket = estimate_critical_exponent(spec, [F(3, 4), F(7, 8)])  # all convergent
    assert bracket.one_sided
    assert bracket.lower is None and bracket.upper == F(3, 4)


def test_all_families_bracket_contains_critical():
    cases = []
    for spec in (
        SurfaceSpec("ball", d=2, ell=3, k=2),
        SurfaceSpec("sphere", d=6, ell=3, k=2),
        SurfaceSpec("sphere", d=4, ell=2, k=3),
        SurfaceSpec("annulus", d=6, ell=2, theta=F(1, 4)),
        SurfaceSpec("prime_sphere", d=5, ell=2, k=2,
                    progressions=(Progression(5, 24),) * 2,
                    ambient=Progression(10, 24)),
    ):
        rc = critical_r(spec.family, spec.d, spec.k, spec.ell, spec.theta)
        grid = sorted({rc * F(num, 100) for num in (72, 85, 100, 118, 140)})
        bracket = estimate_critical_exponent(spec, grid)
        assert bracket.contains(rc), (spec.family, spec.d, rc, bracket.verdicts)


def test_run_sharpness_csv_rows():
    spec = SurfaceSpec("sphere", d=5, ell=2, k=2)
    exp = run_sharpness(spec, [F(11, 20), F(5, 8), F(7, 10)])
    rows = exp.csv_rows()
    assert len(rows) == 3 * 4
    assert {r["verdict"] for r in rows} <= {"convergent", "divergent", "inconclusive"}
    assert all(r["family"] == "sphere" for r in rows)
    assert exp.bracket.contains(F(5, 8))


def test_near_critical_stays_within_declared_margins():
    # just above critical the shells decay too slowly to certify convergence;
    # the declared margins allow divergent or inconclusive there, never convergent
    spec = SurfaceSpec("ball", d=1, ell=2, k=2)
    assert classify_family_series(spec, F(53, 100)).verdict != "convergent"


def test_inconclusive_grid_raises():
    # an ambient class hitting a single admissible height empties the outer
    # shells: every grid point is inconclusive and the bracket is undefined
    spec = SurfaceSpec(
        "prime_sphere", d=2, ell=2, k=2,
        progressions=(Progression(50, 10**9), Progression(50, 10**9)),
        ambient=Progression(100, 10**9),
    )
    with pytest.raises(ValueError):
        estimate_critical_exponent(spec, [F(1, 2), F(3, 4)])
