"""Structural checker for the conditions that make slicing work.

A bilinear averaging operator over a surface ``h(u, v) <= lam`` (or
``= lam``) slices into linear factors when five things hold: a power-law
count asymptotic whose exponent gains d/k per slot, a nonnegative additive
decomposition h(u, v) = h1(u) + h2(v), no holes among admissible heights,
and projections eta_1 = lam - h2(v), eta_2 = lam - h1(u) that stay inside
the factors' admissible sets.  ``check_framework`` tests each condition on
finite probes and reports witnesses for failures.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .lattice import annulus_lower_cutoff, sphere_count_table
from .primes import Progression, prime_power_table
from .surfaces import SurfaceSpec

__all__ = [
    "FrameworkSurface",
    "FrameworkCondition",
    "FrameworkReport",
    "check_framework",
    "phi_linear",
]


def phi_linear(k: int, c: Fraction = Fraction(0)):
    """The scaling exponent family phi(dims) = dims/k + c."""
    c = Fraction(c)

    def phi(dims: int) -> Fraction:
        return Fraction(dims, k) + c

    return phi


@dataclass(frozen=True)
class FrameworkSurface:
    """A bilinear surface presented to the checker.

    ``components`` are the additive pieces (callables on coordinate tuples)
    when the surface declares them; ``joint`` is the raw two-slot function
    and is all a non-additive surface has.  ``constraint`` is "eq", "le", or
    "window" (annular window of width lam^theta).
    """

    label: str
    d: int
    k: int
    constraint: str
    components: tuple | None = None
    joint: object | None = None
    theta: Fraction | None = None
    slot_progressions: tuple[Progression, Progression] | None = None
    ambient: Progression | None = None
    prime: bool = False

    @classmethod
    def from_spec(cls, spec: SurfaceSpec) -> "FrameworkSurface":
        if spec.ell != 2:
            raise ValueError("the framework checker is stated for bilinear surfaces")
        k = spec.k

        def component(u) -> int:
            return sum(abs(c) ** k for c in u)

        constraint = {"ball": "le", "prime_ball": "le", "sphere": "eq",
                      "prime_sphere": "eq", "annulus": "window"}[spec.family]
        return cls(
            label=spec.describe(),
            d=spec.d,
            k=k,
            constraint=constraint,
            components=(component, component),
            joint=None,
            theta=spec.theta,
            slot_progressions=spec.progressions,
            ambient=spec.ambient,
            prime=spec.is_prime,
        )

    @classmethod
    def multiplicative(cls, d: int, label: str = "h(u,v) = |u|^2 * |v|^2"):
        """The canonical non-additive counterexample surface."""

        def joint(u, v) -> int:
            return sum(c * c for c in u) * sum(c * c for c in v)

        return cls(label=label, d=d, k=2, constraint="le", joint=joint)

    def factor_counts(self, limit: int):
        """Nonzero-count table of {u : h_i(u) = s} for s <= limit."""
        if self.prime:
            return prime_power_table(self.d, self.k, limit, weighted=False)
        return sphere_count_table(self.d, self.k, limit)

    def slot_allows(self, slot: int, value: int) -> bool:
        if value < 0:
            return False
        if self.slot_progressions is None:
            return True
        return value in self.slot_progressions[slot]

    def ambient_lambdas(self, lam_max: int) -> list[int]:
        lams = range(1, lam_max + 1)
        if self.ambient is None:
            return list(lams)
        return [x for x in lams if x in self.ambient]


@dataclass(frozen=True)
class FrameworkCondition:
    index: int
    name: str
    passed: bool
    witness: object = None
    detail: str = ""


@dataclass(frozen=True)
class FrameworkReport:
    surface: str
    conditions: tuple[FrameworkCondition, ...]
    below_onset_holes: tuple[int, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.conditions)

    def condition(self, index: int) -> FrameworkCondition:
        return self.conditions[index - 1]


def _surface_pairs(surface: FrameworkSurface, lam: int, f1_vals, f2_vals):
    """Realized (s1, s2) pairs on the surface at height lam."""
    if surface.constraint == "eq":
        for s2 in f2_vals:
            if s2 > lam:
                break
            s1 = lam - s2
            if s1 in f1_vals:
                yield s1, s2
    elif surface.constraint == "le":
        for s2 in f2_vals:
            if s2 > lam:
                break
            for s1 in f1_vals:
                if s1 + s2 > lam:
                    break
                yield s1, s2
    else:  # window
        cutoff = annulus_lower_cutoff(lam, surface.theta)
        for s2 in f2_vals:
            if s2 > lam:
                break
            for s1 in f1_vals:
                tot = s1 + s2
                if tot > lam:
                    break
                if tot > cutoff:
                    yield s1, s2


def check_framework(surface: FrameworkSurface, phi, lam_max: int,
                    ambient_onset: int = 1, factor_onset: int = 1,
                    probe_radius: int = 2,
                    max_lambda_probes: int = 50) -> FrameworkReport:
    """Evaluate the five slicing conditions on finite probes.

    ``phi`` maps a dimension count to the exact count-growth exponent.
    Coverage (condition 3) scans every admissible height in [1, lam_max];
    heights below the onsets may be holes and are reported separately.
    Conditions 4 and 5 probe realized surface pairs for up to
    ``max_lambda_probes`` admissible heights.
    """
    conditions = []

    # 1: scaling exponent gains d/k per slot
    want = Fraction(surface.d, surface.k)
    got2 = phi(2 * surface.d) - phi(surface.d)
    got3 = phi(3 * surface.d) - phi(2 * surface.d)
    ok1 = got2 == want and got3 == want
    conditions.append(FrameworkCondition(
        1, "count asymptotic scales by d/k per slot", ok1,
        None if ok1 else {"expected": str(want), "bilinear_gain": str(got2),
                          "trilinear_gain": str(got3)},
        f"phi(2d)-phi(d) = {got2}, need {want}",
    ))

    # 2: positive additive structure
    if surface.components is None:
        conditions.append(FrameworkCondition(
            2, "additive nonnegative decomposition", False,
            "structural: no additive decomposition declared",
            "surface only provides a joint h(u, v)",
        ))
        for idx, name in ((3, "admissible heights have no holes"),
                          (4, "slot-1 projections stay admissible"),
                          (5, "slot-2 projections stay admissible")):
            conditions.append(FrameworkCondition(
                idx, name, False, "structural: requires an additive decomposition"))
        return FrameworkReport(surface.label, tuple(conditions))

    witness2 = None
    box = list(product(range(-probe_radius, probe_radius + 1), repeat=surface.d))
    for i, comp in enumerate(surface.components):
        for u in box:
            val = comp(u)
            if val < 0:
                witness2 = {"slot": i, "point": u, "value": val}
                break
        if witness2:
            break
    if witness2 is None and surface.joint is not None:
        for u in box:
            for v in box:
                if surface.joint(u, v) != surface.components[0](u) + surface.components[1](v):
                    witness2 = {"point": (u, v), "joint": surface.joint(u, v)}
                    break
            if witness2:
                break
    conditions.append(FrameworkCondition(
        2, "additive nonnegative decomposition", witness2 is None, witness2,
        f"components probed exhaustively on [-{probe_radius},{probe_radius}]^{surface.d}",
    ))

    # 3: no holes among admissible heights (above the onsets)
    factor_table = surface.factor_counts(lam_max)
    cum = np.cumsum(factor_table)
    slot_tables = []
    for slot in (0, 1):
        t = np.array(factor_table, copy=True)
        if surface.slot_progressions is not None:
            for s in range(lam_max + 1):
                if not surface.slot_allows(slot, s):
                    t[s] = 0
        slot_tables.append(t)
    ambient_eq = np.convolve(slot_tables[0], slot_tables[1])[: lam_max + 1]
    ambient_cum = np.cumsum(ambient_eq)
    lams = surface.ambient_lambdas(lam_max)
    holes = []
    for lam in lams:
        if surface.constraint == "le":
            filled = ambient_cum[lam] > 0
        elif surface.constraint == "eq":
            filled = ambient_eq[lam] > 0
        else:
            cutoff = annulus_lower_cutoff(lam, surface.theta)
            filled = _window_count(ambient_cum, lam, cutoff) > 0
        if not filled:
            holes.append(lam)
    late_holes = [h for h in holes if h >= ambient_onset]
    below = tuple(h for h in holes if h < ambient_onset)
    factor_holes = []
    for slot in (0, 1):
        for eta in range(factor_onset, lam_max + 1):
            if not surface.slot_allows(slot, eta):
                continue
            if surface.constraint == "le":
                if cum[eta] == 0:
                    factor_holes.append((slot, eta))
            elif factor_table[eta] == 0:
                factor_holes.append((slot, eta))
    ok3 = not late_holes and not factor_holes
    conditions.append(FrameworkCondition(
        3, "admissible heights have no holes", ok3,
        None if ok3 else {"ambient_holes": late_holes[:5],
                          "factor_holes": factor_holes[:5]},
        f"{len(lams)} ambient heights scanned above onset {ambient_onset}; "
        f"{len(below)} holes below the onset",
    ))

    # 4 & 5: projections land in the factors' admissible sets
    f_vals = [int(s) for s in np.flatnonzero(factor_table)]
    slot_vals = []
    for slot in (0, 1):
        slot_vals.append([s for s in f_vals if surface.slot_allows(slot, s)])
    probe_lams = [lam for lam in lams if lam >= ambient_onset][:max_lambda_probes]
    for cond_index, slot in ((4, 0), (5, 1)):
        other = 1 - slot
        witness = None
        for lam in probe_lams:
            pairs = _surface_pairs(
                surface, lam,
                set(slot_vals[0]) if surface.constraint == "eq" else slot_vals[0],
                slot_vals[1],
            )
            for s1, s2 in pairs:
                eta = lam - (s2 if slot == 0 else s1)
                if not surface.slot_allows(slot, eta) or eta < 0:
                    witness = {"lam": lam, "h_other": (s2 if slot == 0 else s1),
                               "eta": eta}
                    break
            if witness:
                break
        conditions.append(FrameworkCondition(
            cond_index, f"slot-{slot + 1} projections stay admissible",
            witness is None, witness,
            f"probed {len(probe_lams)} heights",
        ))

    return FrameworkReport(surface.label, tuple(conditions), below)


def _eq_count(table, lam: int):
    return table[lam]


def _window_count(cum, lam: int, cutoff: int):
    hi = cum[lam]
    lo = cum[cutoff] if cutoff >= 0 else 0
    return hi - lo
