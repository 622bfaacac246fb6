"""Randomized domination suites: deterministic instance sampling and runners.

Each instance derives its own RNG from (seed, index), so results are
independent of worker count and identical across runs with the same seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .gridfn import GridFunction
from .operators import Box, MaximalConfig
from .parallel import pmap
from .primes import Progression
from .slicing import verify_domination
from .surfaces import SurfaceSpec

__all__ = ["SuitePlan", "sample_grid", "domination_suite", "SUITE_PLANS"]


def sample_grid(rng: random.Random, d: int, size: int, radius: int,
                vmax: int = 9) -> GridFunction:
    """Random nonnegative integer grid in [-radius, radius]^d, nonempty."""
    pts = {}
    for _ in range(size):
        p = tuple(rng.randint(-radius, radius) for _ in range(d))
        pts[p] = rng.randint(0, vmax)
    g = GridFunction(d, pts)
    if not g:
        g = GridFunction(d, {tuple(rng.randint(-radius, radius) for _ in range(d)): 1})
    return g


@dataclass(frozen=True)
class SuitePlan:
    """Shape of one randomized instance family."""

    family: str
    ell: int
    dims: tuple[int, ...]  # cycled by instance index
    k: int = 2
    thetas: tuple[Fraction, ...] | None = None
    support_radius: int = 6
    support_size: tuple[int, int] = (2, 8)
    lam_max_by_d: dict | None = None
    box_radius_by_d: dict | None = None
    ks: tuple[int, ...] | None = None  # cycled, for prime suites

    def instance(self, seed, index: int):
        rng = random.Random(f"{seed}:{self.family}:{index}")
        d = self.dims[index % len(self.dims)]
        k = self.k if self.ks is None else self.ks[index % len(self.ks)]
        theta = None
        progressions = ambient = None
        if self.thetas is not None:
            theta = self.thetas[index % len(self.thetas)]
        if self.family == "prime_sphere":
            if k % 2:  # odd k, even d: the parity classes
                progressions = (Progression(0, 2),) * self.ell
                ambient = Progression(0, 2)
            else:  # odd-prime coordinates: squares are 1 mod 8
                progressions = (Progression(d % 8, 8),) * self.ell
                ambient = Progression((self.ell * d) % 8, 8)
        spec = SurfaceSpec(self.family, d=d, ell=self.ell, k=k, theta=theta,
                           progressions=progressions, ambient=ambient)
        lam_max = (self.lam_max_by_d or {}).get(d, 100)
        nlo, nhi = self.support_size
        fs = [
            sample_grid(rng, d, rng.randint(nlo, nhi), self.support_radius)
            for _ in range(self.ell)
        ]
        box_r = (self.box_radius_by_d or {}).get(d)
        box = None
        if box_r is not None:
            box = Box((-box_r,) * d, (box_r,) * d)
        lead = rng.randrange(self.ell)
        return spec, fs, lam_max, box, lead


# desk-scale plans keyed by name; lam_max and boxes shrink with dimension to
# keep each suite well inside its time budget
SUITE_PLANS = {
    "ball_bilinear": SuitePlan(
        family="ball", ell=2, dims=(1, 2, 3), k=2,
        support_radius=6, support_size=(2, 8),
        lam_max_by_d={1: 300, 2: 120, 3: 48},
    ),
    "ball_trilinear": SuitePlan(
        family="ball", ell=3, dims=(1, 2, 3), k=2,
        support_radius=6, support_size=(2, 5),
        lam_max_by_d={1: 200, 2: 60, 3: 24},
    ),
    "sphere_bilinear": SuitePlan(
        family="sphere", ell=2, dims=(2, 3, 4, 5), k=2,
        support_radius=4, support_size=(2, 7),
        lam_max_by_d={2: 100, 3: 60, 4: 30, 5: 20},
        box_radius_by_d={4: 4, 5: 3},
    ),
    "annulus_bilinear": SuitePlan(
        family="annulus", ell=2, dims=(5,), k=2,
        thetas=(Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)),
        support_radius=2, support_size=(2, 6),
        lam_max_by_d={5: 40},
        box_radius_by_d={5: 2},
    ),
    "prime_bilinear": SuitePlan(
        family="prime_sphere", ell=2, dims=(2,), ks=(2, 3),
        support_radius=4, support_size=(2, 8),
        lam_max_by_d={2: 220},
        box_radius_by_d={2: 8},
    ),
}


def _run_one(payload):
    plan_name, seed, index, weighted = payload
    plan = SUITE_PLANS[plan_name]
    spec, fs, lam_max, box, lead = plan.instance(seed, index)
    progression = spec.ambient if spec.is_prime else None
    config = MaximalConfig.upto(lam_max, progression=progression)
    report = verify_domination(spec, fs, config, box, lead_slot=lead,
                               weighted=weighted)
    return {
        "instance": index,
        "family": spec.family,
        "d": spec.d,
        "k": spec.k,
        "ell": spec.ell,
        "theta": "" if spec.theta is None else str(spec.theta),
        "lead_slot": lead,
        "lam_max": lam_max,
        "mode": report.mode,
        "applicable": report.applicable,
        "dominated": report.dominated,
        "violations": report.violations,
        "points_checked": report.points_checked,
        "max_violation": "" if report.max_violation is None else str(report.max_violation),
        "max_violation_float": "" if report.max_violation_float is None else repr(report.max_violation_float),
        "rel_violation_float": "" if report.rel_violation_float is None else repr(report.rel_violation_float),
        "witness": "" if report.witness is None else " ".join(map(str, report.witness)),
    }


def domination_suite(plan_name: str, instances: int, seed, workers: int = 1,
                     weighted: bool = True) -> list[dict]:
    """Run `instances` sampled domination checks; rows in instance order."""
    if plan_name not in SUITE_PLANS:
        raise ValueError(f"unknown suite plan {plan_name!r}; know {sorted(SUITE_PLANS)}")
    payloads = [(plan_name, seed, i, weighted) for i in range(instances)]
    return pmap(_run_one, payloads, workers)
