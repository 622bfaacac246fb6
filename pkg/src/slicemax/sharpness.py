"""Dirac-delta sharpness experiments.

Feeding delta functions to a multilinear maximal operator and choosing the
height lam = ell * |x|_k at each x gives the lower-bound series

    sum_{0 < |x|_k^(1/k) <= R}  (ell * |x|_k)^(-phi * r),

with phi the family's power-law exponent; its convergence in r encodes the
necessary condition on r.  Divergence is not observable at finite scale, so
classification is shell-based with declared margins: geometric decay of
dyadic shell sums (ratio < 0.9) reads as convergent, shell sums bounded
below by half the first shell read as divergent, anything else is
inconclusive.  Shell masses aggregate exact lattice counts; the constant
ell^(-phi*r) scales every shell alike and is dropped from classification.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .lattice import sphere_count_table
from .surfaces import SurfaceSpec, power_law_exponent

__all__ = [
    "delta_term",
    "delta_partial_sum",
    "classify_power_sum",
    "ShellClassification",
    "classify_family_series",
    "estimate_critical_exponent",
    "CriticalBracket",
    "SharpnessExperiment",
    "run_sharpness",
]

_DELTA_FAMILIES = ("ball", "sphere", "annulus", "prime_sphere")

CONVERGENT_RATIO = 0.9     # all shell ratios below this: convergent
DIVERGENT_FLOOR = 0.5      # all shells at least this multiple of the first: divergent


def _check_family(spec: SurfaceSpec) -> None:
    if spec.family not in _DELTA_FAMILIES:
        raise ValueError(f"no delta experiment for family {spec.family!r}")


def _admissible(spec: SurfaceSpec, s: int) -> bool:
    """Is lam = ell*s an admissible height for the family's supremum?"""
    if spec.family == "prime_sphere" and spec.ambient is not None:
        return (spec.ell * s) in spec.ambient
    return True


def delta_term(spec: SurfaceSpec, s: int, r: Fraction):
    """The series term of a point with offset size s = |x|_k (s >= 1).

    Equals the r-th power of the single-tuple average at lam = ell*s; exact
    Fraction when the exponent is integral.
    """
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    if not _admissible(spec, s):
        return Fraction(0)
    exponent = power_law_exponent(spec) * r
    base = spec.ell * s
    if exponent.denominator == 1:
        return Fraction(1, base ** int(exponent))
    return float(base) ** (-float(exponent))


def delta_partial_sum(spec: SurfaceSpec, r: Fraction, R: int):
    """Partial sum over 0 < |x|_k^(1/k) <= R of the delta series terms.

    Aggregates by the exact count of lattice points at each offset size;
    exact Fraction when the exponent phi*r is an integer, float64 otherwise.
    """
    _check_family(spec)
    r = Fraction(r)
    if r <= 0:
        raise ValueError("r must be positive")
    if R < 0:
        raise ValueError("R must be >= 0")
    if R == 0:
        return Fraction(0)
    limit = R**spec.k
    table = sphere_count_table(spec.d, spec.k, limit)
    exponent = power_law_exponent(spec) * r
    exact = exponent.denominator == 1
    total = Fraction(0) if exact else 0.0
    for s in range(1, limit + 1):
        cnt = int(table[s])
        if not cnt or not _admissible(spec, s):
            continue
        base = spec.ell * s
        if exact:
            total += Fraction(cnt, base ** int(exponent))
        else:
            total += cnt * float(base) ** (-float(exponent))
    return total


# ---------------------------------------------------------------------------
# shell classification


@dataclass(frozen=True)
class ShellClassification:
    verdict: str  # "convergent" | "divergent" | "inconclusive"
    shells: tuple[float, ...]
    ratios: tuple[float, ...]


def _classify_shells(shells: list[float]) -> ShellClassification:
    if len(shells) < 3:
        raise ValueError("need at least three shells (a ladder R, 2R, 4R, 8R)")
    if all(s == 0.0 for s in shells):
        return ShellClassification("convergent", tuple(shells), ())
    if any(s == 0.0 for s in shells):
        return ShellClassification("inconclusive", tuple(shells), ())
    ratios = tuple(b / a for a, b in zip(shells, shells[1:]))
    if all(rho < CONVERGENT_RATIO for rho in ratios):
        return ShellClassification("convergent", tuple(shells), ratios)
    if min(shells) >= DIVERGENT_FLOOR * shells[0]:
        return ShellClassification("divergent", tuple(shells), ratios)
    return ShellClassification("inconclusive", tuple(shells), ratios)


def _validate_radii(radii) -> list[int]:
    rs = [int(x) for x in radii]
    if len(rs) < 4:
        raise ValueError("need a ladder of at least four radii (three shells)")
    if any(b <= a for a, b in zip(rs, rs[1:])) or rs[0] < 1:
        raise ValueError("radii must be strictly increasing and >= 1")
    return rs


def _shell_sums(d: int, k: int, radii: list[int], exponent: float,
                keep=None) -> list[float]:
    """Exact-count shell sums of s^(-exponent) over s in (R_i^k, R_{i+1}^k]."""
    limit = radii[-1] ** k
    table = sphere_count_table(d, k, limit)
    sums = []
    for lo, hi in zip(radii, radii[1:]):
        acc = 0.0
        for s in range(lo**k + 1, hi**k + 1):
            cnt = int(table[s])
            if not cnt or (keep is not None and not keep(s)):
                continue
            acc += cnt * float(s) ** (-exponent)
        sums.append(acc)
    return sums


def classify_power_sum(d: int, s: Fraction, radii=(4, 8, 16, 32)) -> ShellClassification:
    """Classify sum over Z^d of |x|^(-s) by Euclidean shell sums.

    Agrees with the exact criterion (convergent iff s > d) whenever s is at
    least 1/4 away from d; near the boundary it reports inconclusive.
    """
    rs = _validate_radii(radii)
    shells = _shell_sums(d, 2, rs, float(Fraction(s)) / 2.0)
    return _classify_shells(shells)


def classify_family_series(spec: SurfaceSpec, r: Fraction,
                           radii=(4, 8, 16, 32)) -> ShellClassification:
    """Classify the family's delta series at exponent r (constant-free)."""
    _check_family(spec)
    rs = _validate_radii(radii)
    exponent = float(power_law_exponent(spec) * Fraction(r))
    keep = None
    if spec.family == "prime_sphere" and spec.ambient is not None:
        keep = lambda s: (spec.ell * s) in spec.ambient
    shells = _shell_sums(spec.d, spec.k, rs, exponent, keep)
    return _classify_shells(shells)


# ---------------------------------------------------------------------------
# bracketing the critical exponent


@dataclass(frozen=True)
class CriticalBracket:
    lower: Fraction | None  # largest r classified divergent
    upper: Fraction | None  # smallest r classified convergent
    verdicts: tuple  # (r, verdict) in grid order

    @property
    def one_sided(self) -> bool:
        return self.lower is None or self.upper is None

    def contains(self, r_c: Fraction) -> bool:
        if self.one_sided:
            return False
        return self.lower <= r_c <= self.upper

    @property
    def width(self) -> Fraction | None:
        if self.one_sided:
            return None
        return self.upper - self.lower


def estimate_critical_exponent(spec: SurfaceSpec, r_grid,
                               radii=(4, 8, 16, 32)) -> CriticalBracket:
    """Bracket the critical r between observed divergence and convergence."""
    grid = sorted(Fraction(r) for r in r_grid)
    if not grid:
        raise ValueError("empty r grid")
    verdicts = []
    lower = None
    upper = None
    for r in grid:
        cls = classify_family_series(spec, r, radii)
        verdicts.append((r, cls.verdict))
        if cls.verdict == "divergent":
            lower = r if lower is None else max(lower, r)
        elif cls.verdict == "convergent":
            upper = r if upper is None else min(upper, r)
    if all(v == "inconclusive" for _, v in verdicts):
        raise ValueError("every grid point is inconclusive; widen the grid or the radii")
    return CriticalBracket(lower, upper, tuple(verdicts))


# ---------------------------------------------------------------------------
# bundled experiment with CSV rows


@dataclass(frozen=True)
class SharpnessExperiment:
    spec: SurfaceSpec
    r_grid: tuple[Fraction, ...]
    radii: tuple[int, ...]
    partial_sums: dict  # (r, R) -> float
    classifications: dict  # r -> ShellClassification
    bracket: CriticalBracket

    def csv_rows(self):
        """Rows (family, d, k, ell, theta, r, R, partial_sum, shell_ratio, verdict)."""
        rows = []
        theta = "" if self.spec.theta is None else str(self.spec.theta)
        for r in self.r_grid:
            cls = self.classifications[r]
            for i, R in enumerate(self.radii):
                ratio = ""
                if 1 <= i <= len(cls.ratios):
                    ratio = repr(cls.ratios[i - 1])
                rows.append({
                    "family": self.spec.family,
                    "d": self.spec.d,
                    "k": self.spec.k,
                    "ell": self.spec.ell,
                    "theta": theta,
                    "r": str(r),
                    "R": R,
                    "partial_sum": repr(float(self.partial_sums[(r, R)])),
                    "shell_ratio": ratio,
                    "verdict": cls.verdict,
                })
        return rows


def run_sharpness(spec: SurfaceSpec, r_grid, radii=(4, 8, 16, 32)) -> SharpnessExperiment:
    rs = _validate_radii(radii)
    grid = tuple(sorted(Fraction(r) for r in r_grid))
    partial = {}
    for r in grid:
        for R in rs:
            partial[(r, R)] = delta_partial_sum(spec, r, R)
    classifications = {r: classify_family_series(spec, r, rs) for r in grid}
    bracket = estimate_critical_exponent(spec, grid, rs)
    return SharpnessExperiment(spec, grid, tuple(rs), partial, classifications, bracket)
