"""Slice-and-dice decompositions and exact pointwise domination checks.

For each family the truncated multilinear maximal function is bounded by a
pointwise product of one cumulative ("Hardy-Littlewood type") factor on a
lead slot and one maximal factor on the remaining slots:

* ball            M_ball(f_lead) * (multilinear ball maximal of the rest)
* sphere          M_ball(f_lead) * shifted spherical maximal of the rest
* annulus         M_ball(f_lead) * shifted annular maximal of the rest
* prime_sphere    prime HL of the lead slot * shifted prime spherical
                  maximal of the rest, under the residue-class hypotheses

The "shifted" factors read the normalization at the outer truncation index
lam and the surface at a height b <= lam; with them every domination claim
below holds exactly at every point, which is what ``verify_domination``
checks in exact arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exactnum import PowerValue
from .operators import (
    Box,
    MaximalConfig,
    NormalizationMode,
    OperatorGrid,
    _combine_profiles,
    _is_zero,
    _profile,
    _shifted_equality_max,
    _shifted_window_max,
    default_box,
    linear_maximal,
    maximal_function,
)
from .primes import Progression, sumset_check
from .surfaces import SurfaceSpec

__all__ = [
    "slice_rhs",
    "verify_domination",
    "DominationReport",
    "grid_product",
    "annulus_literal_ratio_probe",
]

_REL_TOL = 1e-9


def grid_product(a: OperatorGrid, b: OperatorGrid) -> OperatorGrid:
    """Pointwise product on the intersection of the supports."""
    values = {}
    for pt, va in a.items():
        vb = b.value(pt)
        if _is_zero(vb):
            continue
        if isinstance(va, float) or isinstance(vb, float):
            values[pt] = float(va) * float(vb)
        else:
            values[pt] = _as_power(va) * _as_power(vb)
    return OperatorGrid(a.dim, a.box, values, {"product": (a.meta, b.meta)})


def _as_power(v) -> PowerValue:
    if isinstance(v, PowerValue):
        return v
    return PowerValue(v)


def _rest_progression(spec: SurfaceSpec, rest: list[int]) -> Progression | None:
    """Sum of the remaining slots' residue classes (a class mod gcd)."""
    if spec.progressions is None:
        return None
    acc = spec.progressions[rest[0]]
    for i in rest[1:]:
        nxt = spec.progressions[i]
        g = math.gcd(acc.modulus, nxt.modulus)
        acc = Progression((acc.residue + nxt.residue) % g, g)
    return acc


def _rest_factor(spec: SurfaceSpec, fs, rest: list[int], config: MaximalConfig,
                 box: Box, weighted: bool) -> OperatorGrid:
    """Maximal factor on the remaining slots, per family."""
    sub_fs = [fs[i] for i in rest]
    if spec.family == "ball":
        sub = SurfaceSpec("ball", spec.d, len(rest), spec.k)
        return maximal_function(sub, sub_fs, config, box)
    phi_rest = Fraction(len(rest) * spec.d, spec.k) - 1
    if spec.family == "annulus":
        phi_rest = Fraction(len(rest) * spec.d, 2) - 1 + spec.theta
    values = {}
    limit = config.lam_max
    for x in box.points():
        profiles = [
            _profile(
                fs[i], x, spec.k, limit,
                prime=spec.is_prime, weighted=weighted,
                slot_progression=spec.slot_progression(i),
            )
            for i in rest
        ]
        svals, masses = _combine_profiles(profiles, limit)
        if not svals:
            continue
        if spec.family == "annulus":
            val = _shifted_window_max(svals, masses, config, spec.theta, phi_rest)
        else:
            val = _shifted_equality_max(svals, masses, config, phi_rest)
        if not _is_zero(val):
            values[tuple(x)] = val
    kind = {
        "sphere": "shifted_sphere",
        "annulus": "shifted_annulus",
        "prime_sphere": "shifted_prime_sphere",
    }[spec.family]
    return OperatorGrid(spec.d, box, values, {"kind": kind, "slots": tuple(rest)})


def slice_rhs(spec: SurfaceSpec, fs, config: MaximalConfig, box: Box | None = None,
              lead_slot: int = 0, weighted: bool = True) -> OperatorGrid:
    """The sliced majorant: lead cumulative factor times the rest factor.

    The factor truncations run over every integer height up to the
    truncation bound of ``config`` so the product majorizes the multilinear
    maximal function exactly.  For ell = 1 the slicing degenerates to the
    family's own linear maximal function.
    """
    if spec.family == "general_additive":
        raise ValueError("general_additive surfaces have no registered linear factors")
    if not 0 <= lead_slot < spec.ell:
        raise ValueError(f"lead_slot must index a slot, got {lead_slot}")
    full = MaximalConfig.upto(config.lam_max, NormalizationMode.power_law())
    if box is None:
        box = default_box(fs, spec.k, config.lam_max)
    if spec.ell == 1:
        return maximal_function(spec, fs, full, box, weighted=weighted)
    if box is None:
        return OperatorGrid(spec.d, None, {}, {})
    lead = fs[lead_slot]
    if spec.is_prime:
        lead_grid = linear_maximal(
            "prime_hl", lead, full, k=spec.k,
            slot_progression=spec.slot_progression(lead_slot),
            weighted=weighted, box=box,
        )
    else:
        lead_grid = linear_maximal("hl_ball", lead, full, k=spec.k, box=box)
    rest = [i for i in range(spec.ell) if i != lead_slot]
    rest_grid = _rest_factor(spec, fs, rest, full, box, weighted)
    out = grid_product(lead_grid, rest_grid)
    out.meta.update({"lead_slot": lead_slot, "lam_max": config.lam_max})
    return out


# ---------------------------------------------------------------------------
# domination reports


@dataclass(frozen=True)
class DominationReport:
    lhs_id: str
    rhs_id: str
    box: tuple | None
    applicable: bool
    reason: str | None
    dominated: bool
    violations: int
    points_checked: int
    max_violation: Fraction | None  # exact lhs-rhs at the witness, when rational
    max_violation_float: float | None
    rel_violation_float: float | None
    witness: tuple | None
    lhs_at_witness: str | None
    rhs_at_witness: str | None
    lam_max: int
    lead_slot: int
    mode: str  # "exact" or "weighted"
    point_rows: tuple = ()  # (x, lhs, rhs, diff_float) when collected

    def detail_rows(self) -> list[dict]:
        """One row per evaluation point (when collected at verification time)."""
        return [
            {
                "x": " ".join(map(str, pt)),
                "lhs": lhs,
                "rhs": rhs,
                "diff_float": repr(diff),
            }
            for pt, lhs, rhs, diff in self.point_rows
        ]

    def summary_row(self) -> dict:
        return {
            "lhs": self.lhs_id,
            "rhs": self.rhs_id,
            "box": self.box,
            "applicable": self.applicable,
            "reason": self.reason,
            "dominated": self.dominated,
            "violations": self.violations,
            "points_checked": self.points_checked,
            "max_violation": None if self.max_violation is None else str(self.max_violation),
            "max_violation_float": self.max_violation_float,
            "rel_violation_float": self.rel_violation_float,
            "witness": self.witness,
            "lhs_at_witness": self.lhs_at_witness,
            "rhs_at_witness": self.rhs_at_witness,
            "lam_max": self.lam_max,
            "lead_slot": self.lead_slot,
            "mode": self.mode,
        }


def _not_applicable(spec, config, reason, lead_slot, mode) -> DominationReport:
    return DominationReport(
        lhs_id=f"T*[{spec.describe()}]",
        rhs_id="sliced product",
        box=None,
        applicable=False,
        reason=reason,
        dominated=False,
        violations=0,
        points_checked=0,
        max_violation=None,
        max_violation_float=None,
        rel_violation_float=None,
        witness=None,
        lhs_at_witness=None,
        rhs_at_witness=None,
        lam_max=config.lam_max,
        lead_slot=lead_slot,
        mode=mode,
    )


def _value_str(v) -> str:
    if isinstance(v, PowerValue):
        return v.exact_str()
    if isinstance(v, float):
        return repr(v)
    return str(v)


def verify_domination(spec: SurfaceSpec, fs, config: MaximalConfig,
                      box: Box | None = None, lead_slot: int = 0,
                      weighted: bool = True,
                      collect_points: bool = False) -> DominationReport:
    """Exact pointwise check that the sliced product dominates T*.

    Preconditions (reported as "not applicable", never as violations):
    power-law normalization on the left; d >= k for the integer sphere
    family; residue-class hypotheses with a passing sumset check for prime
    families.  Sign decisions are exact for integer families and weight-1
    prime mode; weighted prime mode compares float64 values and reports the
    relative excess.
    """
    mode = "weighted" if (spec.is_prime and weighted) else "exact"
    if config.normalization.kind != "power_law":
        return _not_applicable(spec, config, "domination is stated for power-law normalization",
                               lead_slot, mode)
    if spec.family == "sphere" and spec.d < spec.k:
        return _not_applicable(spec, config, f"sphere slicing needs d >= k (d={spec.d}, k={spec.k})",
                               lead_slot, mode)
    if spec.is_prime:
        if spec.progressions is None or spec.ambient is None:
            return _not_applicable(spec, config, "prime slicing needs slot and ambient progressions",
                                   lead_slot, mode)
        check = sumset_check(list(spec.progressions), spec.ambient)
        if not check.ok:
            return _not_applicable(
                spec, config,
                f"sumset condition fails: residue {check.witness} mod {check.modulus} ({check.witness_side})",
                lead_slot, mode)
        bad = [lam for lam in config.lambda_set if lam not in spec.ambient]
        if bad:
            return _not_applicable(spec, config,
                                   f"lambda {bad[0]} outside the ambient progression",
                                   lead_slot, mode)
    if box is None:
        box = default_box(fs, spec.k, config.lam_max)
    lhs_id = f"T*[{spec.describe()}] lam<={config.lam_max}"
    rhs_id = f"slice(lead={lead_slot})"
    if box is None:
        return DominationReport(
            lhs_id, rhs_id, None, True, None, True, 0, 0, None, None, None,
            None, None, None, config.lam_max, lead_slot, mode)
    lhs = maximal_function(spec, fs, config, box, weighted=weighted)
    rhs = slice_rhs(spec, fs, config, box, lead_slot, weighted=weighted)

    violations = 0
    best_pt = None
    best_diff = None
    best_pair = None
    best_rel = None
    rows = []
    for pt in box.points():
        pt = tuple(pt)
        lv = lhs.value(pt)
        rv = rhs.value(pt)
        lz, rz = _is_zero(lv), _is_zero(rv)
        if lz and rz:
            continue
        if collect_points:
            rows.append((pt, _value_str(lv), _value_str(rv), float(lv) - float(rv)))
        if mode == "weighted":
            lf, rf = float(lv), float(rv)
            diff = lf - rf
            rel = diff / rf if rf > 0 else (float("inf") if lf > 0 else 0.0)
            if rel > _REL_TOL:
                violations += 1
            if best_rel is None or rel > best_rel:
                best_rel = rel
            if best_diff is None or diff > best_diff:
                best_diff, best_pt, best_pair = diff, pt, (lv, rv)
        else:
            if lz:
                cmp = -1 if not rz else 0
            elif rz:
                cmp = 1
            else:
                cmp = _as_power(lv).compare(_as_power(rv))
            if cmp > 0:
                violations += 1
            diff = float(lv) - float(rv)
            if best_diff is None or diff > best_diff:
                best_diff, best_pt, best_pair = diff, pt, (lv, rv)
    max_violation = None
    if best_pair is not None and mode == "exact":
        la = _as_power(best_pair[0]) if not _is_zero(best_pair[0]) else PowerValue(0)
        ra = _as_power(best_pair[1]) if not _is_zero(best_pair[1]) else PowerValue(0)
        if la.is_rational() and ra.is_rational():
            max_violation = la.as_fraction() - ra.as_fraction()
    return DominationReport(
        lhs_id=lhs_id,
        rhs_id=rhs_id,
        box=(box.lo, box.hi),
        applicable=True,
        reason=None,
        dominated=violations == 0,
        violations=violations,
        points_checked=len(box),
        max_violation=max_violation,
        max_violation_float=best_diff,
        rel_violation_float=best_rel,
        witness=best_pt,
        lhs_at_witness=None if best_pair is None else _value_str(best_pair[0]),
        rhs_at_witness=None if best_pair is None else _value_str(best_pair[1]),
        lam_max=config.lam_max,
        lead_slot=lead_slot,
        mode=mode,
        point_rows=tuple(rows),
    )


def annulus_literal_ratio_probe(spec: SurfaceSpec, fs, config: MaximalConfig,
                                box: Box | None = None) -> float:
    """Max over the box of T* / (M_ball(f) * literal annular maximal of g).

    The literal product (upper cutoff fixed at lam) is not a proven
    majorant; this probe measures how far above 1 the ratio gets, for
    comparison with the shifted variant that is.
    """
    if spec.family != "annulus" or spec.ell != 2:
        raise ValueError("the literal-ratio probe is defined for bilinear annuli")
    if box is None:
        box = default_box(fs, spec.k, config.lam_max)
    if box is None:
        return 0.0
    full = MaximalConfig.upto(config.lam_max)
    lhs = maximal_function(spec, fs, config, box)
    lead = linear_maximal("hl_ball", fs[0], full, k=2, box=box)
    literal = linear_maximal("annulus", fs[1], full, theta=spec.theta, box=box)
    rhs = grid_product(lead, literal)
    worst = 0.0
    for pt, lv in lhs.items():
        rv = rhs.value(pt)
        if _is_zero(rv):
            if not _is_zero(lv):
                return float("inf")
            continue
        worst = max(worst, float(lv) / float(rv))
    return worst
