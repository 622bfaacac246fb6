"""Averaging operators and truncated maximal functions on grid functions.

Per evaluation point x, each input slot contributes a radial profile
``{s: mass}`` with ``s = sum_j |x_j - a_j|^k`` over its support; slots
combine by additive convolution of profiles.  A family's average at height
lam reads the combined profile at lam (spheres), cumulatively (balls), or
through an annular window, and maximal functions maximize
``mass(lam) * lam^(-phi)`` over the truncation set.

Maximization scores candidates in float64 and re-compares near-ties
exactly, so values and all downstream order decisions are exact for the
integer families.  Prime families carry float64 log weights throughout;
their weight-1 variants stay exact.
"""

from __future__ import annotations

import itertools
import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .exactnum import PowerValue, iroot
from .gridfn import GridFunction
from .lattice import annulus_lower_cutoff, surface_count_table
from .primes import Progression, sieve
from .surfaces import SurfaceSpec, power_law_exponent

__all__ = [
    "NormalizationMode",
    "MaximalConfig",
    "OperatorGrid",
    "Box",
    "default_box",
    "multilinear_average",
    "maximal_function",
    "linear_maximal",
    "LINEAR_KINDS",
    "lp_norm",
    "ratio_norm_probe",
]

# floats err below 1e-12 relative on these products; ties within the margin
# are re-decided exactly
_TIE_MARGIN = 1e-9

# beyond this bound on accumulated integer masses the int64 batch path could
# overflow; fall back to exact big-int evaluation
_INT64_MASS_SAFE = 1 << 61


# ---------------------------------------------------------------------------
# configs


@dataclass(frozen=True)
class NormalizationMode:
    """How an average at height lam is normalized.

    ``power_law`` divides by lam**exponent (exponent None means the family
    default); ``exact_count`` divides by the exact lattice count (weighted
    count for prime families) of the ambient surface at lam.
    """

    kind: str
    exponent: Fraction | None = None

    def __post_init__(self):
        if self.kind not in ("power_law", "exact_count"):
            raise ValueError(f"unknown normalization kind {self.kind!r}")
        if self.exponent is not None:
            if self.kind != "power_law":
                raise ValueError("only power_law takes an exponent")
            if self.exponent < 0:
                raise ValueError("power-law exponent must be >= 0")

    @classmethod
    def power_law(cls, exponent=None) -> "NormalizationMode":
        exp = None if exponent is None else Fraction(exponent)
        return cls("power_law", exp)

    @classmethod
    def exact_count(cls) -> "NormalizationMode":
        return cls("exact_count")


@dataclass(frozen=True)
class MaximalConfig:
    """Finite truncation of the supremum defining a maximal function."""

    lambda_set: tuple[int, ...]
    normalization: NormalizationMode = field(
        default_factory=lambda: NormalizationMode.power_law()
    )

    def __post_init__(self):
        lams = tuple(sorted(set(int(x) for x in self.lambda_set)))
        if not lams:
            raise ValueError("lambda_set must be nonempty")
        if lams[0] < 1:
            raise ValueError("lambda_set entries must be >= 1")
        object.__setattr__(self, "lambda_set", lams)

    @classmethod
    def upto(cls, lam_max: int, normalization=None,
             progression: Progression | None = None) -> "MaximalConfig":
        """All admissible heights in [1, lam_max]."""
        lams = range(1, lam_max + 1)
        if progression is not None:
            lams = [x for x in lams if x in progression]
            if not lams:
                raise ValueError(
                    f"no member of {progression} in [1, {lam_max}]"
                )
        norm = normalization or NormalizationMode.power_law()
        return cls(tuple(lams), norm)

    @property
    def lam_max(self) -> int:
        return self.lambda_set[-1]

    @property
    def contiguous(self) -> bool:
        return self.lambda_set == tuple(range(self.lambda_set[0], self.lam_max + 1))

    def with_normalization(self, norm: NormalizationMode) -> "MaximalConfig":
        return MaximalConfig(self.lambda_set, norm)


@dataclass(frozen=True)
class Box:
    """Axis-aligned evaluation box [lo, hi] in Z^d."""

    lo: tuple[int, ...]
    hi: tuple[int, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("box corners must share a dimension")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError("empty box")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def __len__(self) -> int:
        n = 1
        for a, b in zip(self.lo, self.hi):
            n *= b - a + 1
        return n

    def points(self):
        return itertools.product(*(range(a, b + 1) for a, b in zip(self.lo, self.hi)))

    def __contains__(self, pt) -> bool:
        return all(a <= c <= b for c, a, b in zip(pt, self.lo, self.hi))

    def describe(self) -> str:
        return "x".join(f"[{a},{b}]" for a, b in zip(self.lo, self.hi))


def default_box(fs, k: int, lam_max: int) -> Box | None:
    """Tight box containing every point where the average can be nonzero.

    A nonzero output at x needs, for every slot i, an offset u_i of size
    <= lam_max with x - u_i in supp f_i; so x lies in every support's
    coordinate box dilated by ceil(lam_max ** (1/k)).  Returns None when the
    dilated boxes do not intersect.
    """
    r = iroot(lam_max, k)
    if r**k < lam_max:
        r += 1
    los, his = [], []
    for f in fs:
        bb = f.bounding_box()
        if bb is None:
            return None
        los.append(tuple(c - r for c in bb[0]))
        his.append(tuple(c + r for c in bb[1]))
    lo = tuple(max(l[j] for l in los) for j in range(fs[0].dim))
    hi = tuple(min(h[j] for h in his) for j in range(fs[0].dim))
    if any(a > b for a, b in zip(lo, hi)):
        return None
    return Box(lo, hi)


class OperatorGrid:
    """Output of a maximal function on a box: point -> exact or float value."""

    __slots__ = ("dim", "box", "_values", "meta")

    def __init__(self, dim: int, box: Box | None, values: dict, meta: dict | None = None):
        self.dim = dim
        self.box = box
        self._values = dict(sorted(values.items()))
        self.meta = meta or {}

    def value(self, point):
        return self._values.get(tuple(point), 0)

    def items(self):
        return self._values.items()

    def __len__(self):
        return len(self._values)

    def values(self):
        return self._values.values()

    def __repr__(self):
        return f"OperatorGrid(dim={self.dim}, nonzero={len(self._values)})"


# ---------------------------------------------------------------------------
# profiles


def _prime_set(limit: int) -> frozenset[int]:
    return frozenset(sieve(limit))


def _profile(f: GridFunction, x, k: int, limit: int,
             prime: bool = False, weighted: bool = True,
             slot_progression: Progression | None = None):
    """Radial profile of f around x: sorted (svals, masses) with s <= limit.

    Prime profiles keep only offsets whose coordinates are all positive
    primes, weighted by the product of their logs (or 1 in weight-1 mode),
    and optionally filtered to a residue class of s.
    """
    svals: dict[int, object] = {}
    if prime:
        pset = _prime_set(iroot(limit, k)) if limit >= 0 else frozenset()
        for a, val in f.items():
            u = tuple(xc - ac for xc, ac in zip(x, a))
            if any(c not in pset for c in u):
                continue
            s = sum(c**k for c in u)
            if s > limit:
                continue
            if slot_progression is not None and s not in slot_progression:
                continue
            if weighted:
                w = 1.0
                for c in u:
                    w *= math.log(c)
                mass = float(val) * w
            else:
                mass = val if val.denominator != 1 else val.numerator
            svals[s] = svals.get(s, 0) + mass
    else:
        for a, val in f.items():
            s = 0
            for xc, ac in zip(x, a):
                s += abs(xc - ac) ** k
                if s > limit:
                    break
            if s <= limit:
                v = val if val.denominator != 1 else val.numerator
                svals[s] = svals.get(s, 0) + v
    items = sorted(svals.items())
    return [s for s, _ in items], [m for _, m in items]


def _combine_profiles(profiles, limit: int):
    """Additive convolution of slot profiles, truncated at limit."""
    acc = dict(zip(*profiles[0]))
    for svals, masses in profiles[1:]:
        if not acc or not svals:
            return [], []
        nxt: dict[int, object] = {}
        for s1, m1 in acc.items():
            for s2, m2 in zip(svals, masses):
                s = s1 + s2
                if s > limit:
                    continue
                prod = m1 * m2
                nxt[s] = nxt.get(s, 0) + prod
        acc = nxt
    items = sorted(acc.items())
    return [s for s, _ in items], [m for _, m in items]


# ---------------------------------------------------------------------------
# single-point maximization


def _power_value(mass, lam: int, phi: Fraction):
    """mass * lam^(-phi) in the exactest type the mass allows."""
    if isinstance(mass, float):
        return mass * float(lam) ** (-float(phi))
    if phi == 0:
        return PowerValue(mass)
    return PowerValue(mass, {lam: -phi})


def _max_candidates(cands):
    """Max of (mass, lam, phi) candidates; float scores, exact near-ties.

    Deterministic: among exact ties the smallest lam wins.
    """
    best = None
    if not cands:
        return 0
    floats = [float(m) * float(l) ** (-float(p)) for m, l, p in cands]
    top = max(floats)
    if top <= 0.0:
        return 0
    if isinstance(cands[0][0], float):
        hits = [i for i, s in enumerate(floats) if s == top]
        m, l, p = min((cands[i] for i in hits), key=lambda c: c[1])
        return _power_value(m, l, p)
    near = [i for i, s in enumerate(floats) if s >= top * (1.0 - _TIE_MARGIN)]
    best = None
    for i in sorted(near, key=lambda i: cands[i][1]):
        val = _power_value(*cands[i])
        if best is None or val.compare(best) > 0:
            best = val
    return best


def _cum_masses(masses):
    out = []
    acc = 0
    for m in masses:
        acc = acc + m
        out.append(acc)
    return out


def _cumulative_max(svals, masses, config: MaximalConfig, phi, counts=None):
    """max over lam of (sum of masses at s <= lam) / normalization."""
    if not svals:
        return 0
    lams = config.lambda_set
    cums = _cum_masses(masses)
    if counts is not None:  # exact_count: scan the whole set
        best = None
        for lam in lams:
            idx = bisect_right(svals, lam)
            if idx == 0:
                continue
            cnt = counts[lam]
            if not cnt:
                continue
            val = _divide_by_count(cums[idx - 1], cnt)
            if best is None or _loose_gt(val, best):
                best = val
        return 0 if best is None else best
    cands = []
    seen = set()
    for i, s in enumerate(svals):
        j = bisect_left(lams, max(s, 1))
        if j >= len(lams):
            break
        lam = lams[j]
        if lam in seen:
            continue
        seen.add(lam)
        idx = bisect_right(svals, lam)
        cands.append((cums[idx - 1], lam, phi))
    return _max_candidates(cands)


def _equality_max(svals, masses, config: MaximalConfig, phi, counts=None):
    """max over lam of (mass at s = lam) / normalization."""
    lamset = set(config.lambda_set)
    cands = []
    for s, m in zip(svals, masses):
        if s in lamset:
            if counts is None:
                cands.append((m, s, phi))
            else:
                cands.append((m, s, counts[s]))
    if counts is not None:
        best = None
        for m, s, cnt in cands:
            if not cnt:
                continue
            val = _divide_by_count(m, cnt)
            if best is None or _loose_gt(val, best):
                best = val
        return 0 if best is None else best
    return _max_candidates(cands)


def _window_mass(svals, cums, lam: int, cutoff: int):
    hi = bisect_right(svals, lam)
    lo = bisect_right(svals, cutoff)
    if hi == 0 or hi <= lo:
        return 0
    upper = cums[hi - 1]
    lower = cums[lo - 1] if lo else 0
    return upper - lower


def _window_max(svals, masses, config: MaximalConfig, theta: Fraction, phi,
                counts=None):
    """max over lam of the annular window mass / normalization."""
    if not svals:
        return 0
    cums = _cum_masses(masses)
    if counts is None and config.contiguous:
        lam_lo, lam_hi = config.lambda_set[0], config.lam_max
        lams = [s for s in svals if lam_lo <= s <= lam_hi]
        if lam_lo >= 1 and (not lams or lams[0] != lam_lo):
            lams.insert(0, lam_lo)
    else:
        lams = config.lambda_set
    cands = []
    best = None
    for lam in lams:
        cutoff = annulus_lower_cutoff(lam, theta)
        mass = _window_mass(svals, cums, lam, cutoff)
        if isinstance(mass, int) and mass == 0:
            continue
        if counts is None:
            cands.append((mass, lam, phi))
        else:
            cnt = counts[lam]
            if not cnt:
                continue
            val = _divide_by_count(mass, cnt)
            if best is None or _loose_gt(val, best):
                best = val
    if counts is not None:
        return 0 if best is None else best
    return _max_candidates(cands)


def _shifted_equality_max(svals, masses, config: MaximalConfig, e: Fraction):
    """sup over pairs (lam, eta <= lam) of lam^(-e) * mass(eta).

    For e >= 0 the best admissible lam for surface height eta is the
    smallest element >= max(eta, 1); for e < 0 it is the largest truncation
    element.  Includes eta = 0, so the plain spherical maximal extended by
    the origin term is recovered exactly when e >= 0.
    """
    lams = config.lambda_set
    cands = []
    for s, m in zip(svals, masses):
        if e >= 0:
            j = bisect_left(lams, max(s, 1))
            if j >= len(lams):
                continue
            lam = lams[j]
        else:
            lam = lams[-1]
            if lam < s:
                continue
        cands.append((m, lam, e))
    return _max_candidates(cands)


def _shifted_window_max(svals, masses, config: MaximalConfig, theta: Fraction,
                        e: Fraction):
    """sup over pairs (lam, b <= lam) of lam^(-e) * window mass at (b, lam^theta).

    Candidate upper cutoffs b are the realized radii; candidate lam values
    are, per b, the smallest admissible lam covering each inclusion
    threshold (or the largest element when e < 0).
    """
    if not svals:
        return 0
    p, q = theta.numerator, theta.denominator
    lams = config.lambda_set
    lam_top = lams[-1]
    cums = _cum_masses(masses)
    cands = []
    for i, b in enumerate(svals):
        if b > lam_top:
            break
        raw: list[int] = []
        if e >= 0:
            raw.append(max(b, 1))
            for j in range(i):
                gap = b - svals[j]
                lam_star = iroot(gap**q, p) + 1
                if lam_star <= lam_top:
                    raw.append(lam_star)
        else:
            raw.append(lam_top)
        for lam_raw in raw:
            j = bisect_left(lams, max(lam_raw, b, 1))
            if j >= len(lams):
                continue
            lam = lams[j]
            lam_p = lam**p
            # lowest included index: s > b - lam^theta, i.e. (b-s)^q < lam^p
            lo_idx = None
            hi_idx = bisect_right(svals, b) - 1
            if hi_idx < 0:
                continue
            lo_bound, hi_bound = 0, hi_idx
            while lo_bound <= hi_bound:
                mid = (lo_bound + hi_bound) // 2
                gap = b - svals[mid]
                if gap < 0 or gap**q < lam_p:
                    lo_idx = mid
                    hi_bound = mid - 1
                else:
                    lo_bound = mid + 1
            if lo_idx is None:
                continue
            mass = cums[hi_idx] - (cums[lo_idx - 1] if lo_idx else 0)
            if isinstance(mass, int) and mass == 0:
                continue
            cands.append((mass, lam, e))
    return _max_candidates(cands)


# exact_count helpers ---------------------------------------------------------


def _divide_by_count(mass, count):
    if isinstance(mass, float) or isinstance(count, float):
        return float(mass) / float(count)
    return Fraction(mass, 1) / Fraction(int(count))


def _loose_gt(a, b) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a > b
    return float(a) > float(b)


# ---------------------------------------------------------------------------
# averages


_count_cache: dict = {}


def _ambient_counts(spec: SurfaceSpec, limit: int):
    key = spec
    cached = _count_cache.get(key)
    if cached is not None and len(cached) > limit:
        return cached
    table = surface_count_table(spec, limit)
    _count_cache[key] = table
    return table


def _check_inputs(spec: SurfaceSpec, fs) -> None:
    if len(fs) != spec.ell:
        raise ValueError(f"family {spec.family} expects {spec.ell} inputs, got {len(fs)}")
    for f in fs:
        if f.dim != spec.d:
            raise ValueError(f"input dimension {f.dim} does not match spec d={spec.d}")


def _slot_profiles(spec: SurfaceSpec, fs, x, limit: int, weighted: bool = True):
    out = []
    for i, f in enumerate(fs):
        out.append(
            _profile(
                f, x, spec.k, limit,
                prime=spec.is_prime,
                weighted=weighted,
                slot_progression=spec.slot_progression(i),
            )
        )
    return out


def multilinear_average(spec: SurfaceSpec, fs, lam: int, norm: NormalizationMode,
                        x, weighted: bool = True):
    """The normalized lam-average of the f_i at the point x.

    Exact (PowerValue / Fraction) for integer families; float64 for weighted
    prime families.  Empty surfaces give 0; a zero count in exact_count mode
    gives 0 by convention.
    """
    _check_inputs(spec, fs)
    if lam < 0:
        raise ValueError("lam must be >= 0")
    if spec.is_prime and spec.ambient is not None and lam not in spec.ambient:
        raise ValueError(f"lam={lam} is not in the ambient progression {spec.ambient}")
    profiles = _slot_profiles(spec, fs, x, lam, weighted)
    svals, masses = _combine_profiles(profiles, lam)
    table = dict(zip(svals, masses))
    if spec.cumulative:
        mass = sum(masses) if masses else 0
    elif spec.family == "annulus":
        cutoff = annulus_lower_cutoff(lam, spec.theta) if lam >= 1 else -1
        mass = sum(m for s, m in table.items() if s > cutoff)
    else:
        mass = table.get(lam, 0)
    if isinstance(mass, int) and mass == 0:
        return 0
    if norm.kind == "exact_count":
        count = _ambient_counts(spec, lam)[lam]
        if not count:
            return 0
        return _divide_by_count(mass, count)
    phi = norm.exponent if norm.exponent is not None else power_law_exponent(spec)
    if lam == 0:
        if phi == 0:
            return _power_value(mass, 1, Fraction(0))
        raise ValueError("power-law normalization needs lam >= 1 unless phi = 0")
    return _power_value(mass, lam, phi)


# ---------------------------------------------------------------------------
# maximal functions over boxes


def _resolve_phi(spec: SurfaceSpec, config: MaximalConfig) -> Fraction | None:
    if config.normalization.kind == "exact_count":
        return None
    if config.normalization.exponent is not None:
        return config.normalization.exponent
    return power_law_exponent(spec)


def _point_value(spec, fs, x, config, phi, counts, weighted):
    limit = config.lam_max
    profiles = _slot_profiles(spec, fs, x, limit, weighted)
    svals, masses = _combine_profiles(profiles, limit)
    if not svals:
        return 0
    if spec.cumulative:
        return _cumulative_max(svals, masses, config, phi, counts)
    if spec.family == "annulus":
        return _window_max(svals, masses, config, spec.theta, phi, counts)
    return _equality_max(svals, masses, config, phi, counts)


def _int_mass_bound(fs, limit: int) -> int:
    bound = limit + 1
    for f in fs:
        bound *= int(sum(v.numerator for _, v in f.items())) or 1
    return bound


def _batch_values(spec, fs, pts, config, phi, counts):
    """Vectorized int64 path for integer-valued, non-prime inputs."""
    limit = config.lam_max
    lams = np.array(config.lambda_set, dtype=np.int64)
    slot_pts = [np.array(f.support(), dtype=np.int64) for f in fs]
    slot_vals = [
        np.array([v.numerator for _, v in f.items()], dtype=np.int64) for f in fs
    ]
    xs = np.array(pts, dtype=np.int64)
    hists = kernels.tuple_hist_batch(slot_pts, slot_vals, xs, spec.k, limit)
    if spec.cumulative:
        table = np.cumsum(hists, axis=1)[:, lams]
    elif spec.family == "annulus":
        cum = np.cumsum(hists, axis=1)
        cutoffs = np.array(
            [annulus_lower_cutoff(int(l), spec.theta) for l in lams], dtype=np.int64
        )
        table = cum[:, lams].copy()
        pos = cutoffs >= 0
        if pos.any():
            table[:, pos] -= cum[:, cutoffs[pos]]
    else:
        table = hists[:, lams]
    if counts is None:
        norm = np.power(lams.astype(np.float64), -float(phi))
    else:
        cnt = np.array([float(counts[int(l)]) for l in lams])
        norm = np.zeros_like(cnt)
        nz = cnt > 0
        norm[nz] = 1.0 / cnt[nz]
    scores = table.astype(np.float64) * norm
    best = scores.max(axis=1)
    out = {}
    for row, x in enumerate(pts):
        top = best[row]
        if top <= 0.0:
            continue
        near = np.flatnonzero(scores[row] >= top * (1.0 - _TIE_MARGIN))
        if counts is not None:
            cands = [
                (int(table[row, j]), int(lams[j]), counts[int(lams[j])]) for j in near
            ]
            val = None
            for m, lam, cnt in sorted(cands, key=lambda c: c[1]):
                if not cnt:
                    continue
                cand = _divide_by_count(m, cnt)
                if val is None or _loose_gt(cand, val):
                    val = cand
            if val is not None:
                out[tuple(int(c) for c in x)] = val
        else:
            cands = [(int(table[row, j]), int(lams[j]), phi) for j in near]
            out[tuple(int(c) for c in x)] = _max_candidates(cands)
    return out


def maximal_function(spec: SurfaceSpec, fs, config: MaximalConfig,
                     box: Box | None = None, weighted: bool = True) -> OperatorGrid:
    """Pointwise max over the truncation set of the normalized averages.

    Returns a grid over the evaluation box (default: the tight box outside
    which every average vanishes).  Values are exact for integer families.
    """
    _check_inputs(spec, fs)
    if box is None:
        box = default_box(fs, spec.k, config.lam_max)
    meta = {
        "lam_max": config.lam_max,
        "normalization": config.normalization.kind,
        "family": spec.family,
    }
    if box is None or any(not f for f in fs):
        return OperatorGrid(spec.d, box, {}, meta)
    phi = _resolve_phi(spec, config)
    counts = None
    if config.normalization.kind == "exact_count":
        counts = _ambient_counts(spec, config.lam_max)
    pts = list(box.points())
    values: dict = {}
    use_batch = (
        not spec.is_prime
        and all(f.is_integer_valued() for f in fs)
        and _int_mass_bound(fs, config.lam_max) < _INT64_MASS_SAFE
        and pts
    )
    if use_batch:
        values = _batch_values(spec, fs, pts, config, phi, counts)
    else:
        for x in pts:
            val = _point_value(spec, fs, x, config, phi, counts, weighted)
            if not _is_zero(val):
                values[tuple(x)] = val
    return OperatorGrid(spec.d, box, values, meta)


def _is_zero(val) -> bool:
    if isinstance(val, (int, Fraction)):
        return val == 0
    if isinstance(val, float):
        return val == 0.0
    return not val


# ---------------------------------------------------------------------------
# linear maximal functions

LINEAR_KINDS = (
    "hl_ball",
    "sphere",
    "shifted_sphere",
    "annulus",
    "shifted_annulus",
    "prime_hl",
    "prime_sphere",
    "shifted_prime_sphere",
)


def _linear_phi(kind: str, d: int, k: int, theta: Fraction | None) -> Fraction:
    if kind in ("hl_ball", "prime_hl"):
        return Fraction(d, k)
    if kind in ("sphere", "prime_sphere", "shifted_sphere", "shifted_prime_sphere"):
        return Fraction(d, k) - 1
    if kind in ("annulus", "shifted_annulus"):
        return Fraction(d, 2) + theta - 1
    raise ValueError(f"unknown linear kind {kind!r}")


def linear_maximal(kind: str, f: GridFunction, config: MaximalConfig, *,
                   k: int = 2, theta: Fraction | None = None,
                   slot_progression: Progression | None = None,
                   weighted: bool = True,
                   box: Box | None = None) -> OperatorGrid:
    """Linear maximal function of one of the registered kinds.

    ``shifted_*`` kinds take the supremum over pairs (lam, b <= lam) with
    the normalization read at lam and the surface at b; they majorize their
    plain counterparts and are what the slicing inequalities use.
    ``slot_progression`` restricts prime offsets to |p|^k in the class.
    """
    if kind not in LINEAR_KINDS:
        raise ValueError(f"unknown linear kind {kind!r}; know {LINEAR_KINDS}")
    prime = kind.startswith("prime") or kind == "shifted_prime_sphere"
    if slot_progression is not None and not prime:
        raise ValueError("slot progressions apply to prime kinds only")
    if (theta is not None) != (kind in ("annulus", "shifted_annulus")):
        raise ValueError("theta is present exactly for annular kinds")
    if theta is not None:
        k = 2
    phi = None
    counts = None
    if config.normalization.kind == "power_law":
        phi = config.normalization.exponent
        if phi is None:
            phi = _linear_phi(kind, f.dim, k, theta)
    else:
        if kind in ("shifted_sphere", "shifted_prime_sphere", "shifted_annulus"):
            raise ValueError("shifted kinds use power-law normalization")
        counts_spec = _linear_count_spec(kind, f.dim, k, theta)
        counts = _ambient_counts(counts_spec, config.lam_max)
    if box is None:
        box = default_box([f], k, config.lam_max)
    meta = {"kind": kind, "lam_max": config.lam_max}
    if box is None:
        return OperatorGrid(f.dim, None, {}, meta)
    values: dict = {}
    limit = config.lam_max
    for x in box.points():
        svals, masses = _profile(f, x, k, limit, prime=prime, weighted=weighted,
                                 slot_progression=slot_progression)
        if not svals:
            continue
        if kind in ("hl_ball", "prime_hl"):
            val = _cumulative_max(svals, masses, config, phi, counts)
        elif kind in ("sphere", "prime_sphere"):
            val = _equality_max(svals, masses, config, phi, counts)
        elif kind in ("shifted_sphere", "shifted_prime_sphere"):
            val = _shifted_equality_max(svals, masses, config, phi)
        elif kind == "annulus":
            val = _window_max(svals, masses, config, theta, phi, counts)
        else:  # shifted_annulus
            val = _shifted_window_max(svals, masses, config, theta, phi)
        if not _is_zero(val):
            values[tuple(x)] = val
    return OperatorGrid(f.dim, box, values, meta)


def _linear_count_spec(kind: str, d: int, k: int, theta) -> SurfaceSpec:
    if kind == "hl_ball":
        return SurfaceSpec("ball", d, 1, k)
    if kind == "sphere":
        return SurfaceSpec("sphere", d, 1, k)
    if kind == "annulus":
        return SurfaceSpec("annulus", d, 1, 2, theta)
    if kind == "prime_hl":
        return SurfaceSpec("prime_ball", d, 1, k)
    if kind == "prime_sphere":
        return SurfaceSpec("prime_sphere", d, 1, k)
    raise ValueError(f"no count normalization for kind {kind!r}")


# ---------------------------------------------------------------------------
# norms and probes


def _value_as_fraction(v):
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, PowerValue) and v.is_rational():
        return v.as_fraction()
    return None


def _fraction_root(x: Fraction, p: int) -> Fraction | None:
    num = iroot(x.numerator, p)
    den = iroot(x.denominator, p)
    if num**p == x.numerator and den**p == x.denominator:
        return Fraction(num, den)
    return None


def lp_norm(f, p) -> Fraction | float:
    """l^p norm of a GridFunction or OperatorGrid; p in (0, inf].

    Exact when the power sum and its root are rational (always for p = 1,
    p = inf over rational values, and integer p with perfect-power sums);
    float64 otherwise, accumulated in sorted point order.
    """
    if isinstance(f, GridFunction):
        vals = [v for _, v in f.items()]
    else:
        vals = list(f.values())
    if not vals:
        return Fraction(0)
    if p == float("inf") or (isinstance(p, str) and p == "inf"):
        fracs = [_value_as_fraction(v) for v in vals]
        if all(x is not None for x in fracs):
            return max(fracs)
        best = vals[0]
        for v in vals[1:]:
            a, b = float(v), float(best)
            if a > b:
                best = v
        return float(best)
    p = Fraction(p)
    if p <= 0:
        raise ValueError("p must be positive")
    fracs = [_value_as_fraction(v) for v in vals]
    if p.denominator == 1 and all(x is not None for x in fracs):
        power_sum = sum(x ** int(p) for x in fracs)
        root = _fraction_root(power_sum, int(p))
        if root is not None:
            return root
        return float(power_sum) ** (1.0 / int(p))
    pf = float(p)
    total = 0.0
    for v in vals:
        total += float(v) ** pf
    return total ** (1.0 / pf)


def ratio_norm_probe(spec: SurfaceSpec, exponents, trials, config: MaximalConfig,
                     box: Box | None = None):
    """Empirical lower bound on the operator norm: max over trial tuples of
    ||T*(f_1,...,f_l)||_r / prod ||f_i||_{p_i}.

    Monotone in the trial set; 0 for an empty set.  Exact rationals survive
    when every norm involved is rational.
    """
    *ps, r = exponents
    if len(ps) != spec.ell:
        raise ValueError(f"need {spec.ell} input exponents plus r")
    best = Fraction(0)
    for fs in trials:
        grid = maximal_function(spec, list(fs), config, box)
        num = lp_norm(grid, r)
        dens = [lp_norm(f, p) for f, p in zip(fs, ps)]
        if any(_is_zero(d) for d in dens):
            continue
        if isinstance(num, Fraction) and all(isinstance(d, Fraction) for d in dens):
            ratio = num
            for d in dens:
                ratio /= d
        else:
            ratio = float(num)
            for d in dens:
                ratio /= float(d)
        if float(ratio) > float(best):
            best = ratio
    return best
