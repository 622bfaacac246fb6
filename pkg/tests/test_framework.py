from fractions import Fraction as F

import pytest

from slicemax.framework import FrameworkSurface, check_framework, phi_linear
from slicemax.primes import Progression
from slicemax.surfaces import SurfaceSpec


def test_ball_passes_all_conditions():
    surface = FrameworkSurface.from_spec(SurfaceSpec("ball", d=2, ell=2, k=2))
    report = check_framework(surface, phi_linear(2), 100)
    assert report.passed
    assert [c.passed for c in report.conditions] == [True] * 5


def test_phi_constant_shift_is_irrelevant():
    surface = FrameworkSurface.from_spec(SurfaceSpec("ball", d=2, ell=2, k=2))
    for c in (F(0), F(-1)):
        report = check_framework(surface, phi_linear(2, c), 60)
        assert report.condition(1).passed


def test_wrong_phi_fails_condition_one():
    surface = FrameworkSurface.from_spec(SurfaceSpec("ball", d=2, ell=2, k=2))
    report = check_framework(surface, phi_linear(3), 60)
    cond = report.condition(1)
    assert not cond.passed
    assert cond.witness["expected"] == "1"


def test_multiplicative_surface_fails_condition_two():
    surface = FrameworkSurface.multiplicative(2)
    report = check_framework(surface, phi_linear(2), 60)
    assert not report.condition(2).passed
    assert "structural" in str(report.condition(2).witness)
    assert not report.passed


def test_sphere_d1_has_holes():
    surface = FrameworkSurface.from_spec(SurfaceSpec("sphere", d=1, ell=2, k=2))
    report = check_framework(surface, phi_linear(2, F(-1)), 60)
    cond = report.condition(3)
    assert not cond.passed
    assert 3 in cond.witness["ambient_holes"]


def test_sphere_d5_passes():
    surface = FrameworkSurface.from_spec(SurfaceSpec("sphere", d=5, ell=2, k=2))
    report = check_framework(surface, phi_linear(2, F(-1)), 200)
    assert report.passed


def test_annulus_passes():
    surface = FrameworkSurface.from_spec(
        SurfaceSpec("annulus", d=5, ell=2, theta=F(1, 2)))
    report = check_framework(surface, phi_linear(2, F(1, 2) - 1), 200)
    assert report.passed


def _prime_surface():
    return FrameworkSurface.from_spec(SurfaceSpec(
        "prime_sphere", d=5, ell=2, k=2,
        progressions=(Progression(5, 24), Progression(5, 24)),
        ambient=Progression(10, 24),
    ))


def test_prime_onsets_derived_from_data():
    # derive the onsets from the factor/ambient tables, then the checker passes
    from slicemax.primes import prime_power_table

    factor = prime_power_table(5, 2, 600, weighted=False)
    factor_holes = [l for l in range(1, 601) if l % 24 == 5 and factor[l] == 0]
    assert factor_holes == [5, 29, 53]
    surface = _prime_surface()
    report = check_framework(surface, phi_linear(2, F(-1)), 600,
                             ambient_onset=154, factor_onset=77)
    assert report.passed
    assert set(report.below_onset_holes) == {10, 34, 58, 82, 106, 130}


def test_prime_without_onset_fails_coverage():
    surface = _prime_surface()
    report = check_framework(surface, phi_linear(2, F(-1)), 300)
    assert not report.condition(3).passed


def test_mismatched_classes_surface_as_coverage_failure():
    # slot classes that do not add up to the ambient class leave the
    # constrained surface empty: condition 3 reports every height as a hole
    surface = FrameworkSurface.from_spec(SurfaceSpec(
        "prime_sphere", d=2, ell=2, k=2,
        progressions=(Progression(2, 8), Progression(2, 8)),
        ambient=Progression(0, 8),  # true sumset is 4 mod 8
    ))
    report = check_framework(surface, phi_linear(2, F(-1)), 300,
                             ambient_onset=1, factor_onset=1)
    assert not report.condition(3).passed


def test_projection_condition_fails_on_cumulative_mismatch():
    # on a cumulative surface the projected index eta_1 = lam - h2(v) is a
    # free height; a slot class it can escape is a witnessed failure
    def component(u):
        return sum(c * c for c in u)

    surface = FrameworkSurface(
        label="ball with a 0 mod 4 first-slot class",
        d=1, k=2, constraint="le",
        components=(component, component),
        slot_progressions=(Progression(0, 4), Progression(0, 1)),
        ambient=Progression(0, 1),
    )
    report = check_framework(surface, phi_linear(2), 60)
    cond4 = report.condition(4)
    assert not cond4.passed
    assert cond4.witness["eta"] % 4 != 0


def test_bilinear_only():
    with pytest.raises(ValueError):
        FrameworkSurface.from_spec(SurfaceSpec("ball", d=2, ell=3, k=2))
