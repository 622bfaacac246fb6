"""Primes, residue progressions, and weighted prime-vector counting.

Prime vectors have all coordinates positive primes and carry the weight
log(p_1)...log(p_d).  Weighted quantities use float64 (53 significant bits)
with a fixed summation order; everything else is exact integer arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exactnum import iroot

__all__ = [
    "sieve",
    "Progression",
    "WeightedPoint",
    "enumerate_prime_sphere",
    "weighted_count",
    "prime_power_table",
    "sumset_check",
    "SumsetResult",
    "parity_rearrangement_check",
    "ParityReport",
]


def sieve(n: int) -> list[int]:
    """Primes <= n, ascending; empty for n < 2."""
    if n < 2:
        return []
    flags = np.ones(n + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return [int(p) for p in np.flatnonzero(flags)]


@dataclass(frozen=True)
class Progression:
    """Residue class a mod m."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        if not 0 <= self.residue < self.modulus:
            raise ValueError(
                f"residue must lie in [0, modulus), got {self.residue} mod {self.modulus}"
            )

    @classmethod
    def parse(cls, text: str) -> "Progression":
        parts = text.split()
        if len(parts) != 3 or parts[1] != "mod":
            raise ValueError(f"progression must look like 'a mod m', got {text!r}")
        return cls(int(parts[0]), int(parts[2]))

    def __str__(self) -> str:
        return f"{self.residue} mod {self.modulus}"

    def __contains__(self, lam: int) -> bool:
        return lam % self.modulus == self.residue

    def members(self, lo: int, hi: int) -> list[int]:
        """Members of the class in [lo, hi]."""
        start = lo + (self.residue - lo) % self.modulus
        return list(range(start, hi + 1, self.modulus))

    def lift(self, modulus: int) -> frozenset[int]:
        """All residues mod `modulus` meeting this class; modulus must be a multiple."""
        if modulus % self.modulus:
            raise ValueError("lift target must be a multiple of the modulus")
        return frozenset(
            (self.residue + t * self.modulus) % modulus
            for t in range(modulus // self.modulus)
        )


def progression_membership(lam: int, gamma: Progression) -> bool:
    return lam in gamma


@dataclass(frozen=True)
class WeightedPoint:
    point: tuple[int, ...]
    weight: float


def _prime_coordinate_values(k: int, limit: int, odd_only: bool = False):
    """(p, p**k, log p) for primes with p**k <= limit."""
    out = []
    for p in sieve(iroot(limit, k) if limit >= 0 else 0):
        if odd_only and p == 2:
            continue
        out.append((p, p**k, math.log(p)))
    return out


def enumerate_prime_sphere(
    d: int, k: int, lam: int, odd_only: bool = False
) -> list[WeightedPoint]:
    """All vectors of positive primes with sum_j p_j^k = lam, lex order.

    Each point carries the weight log(p_1)...log(p_d).
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if lam < 0:
        return []
    coords = _prime_coordinate_values(k, lam, odd_only)
    out: list[WeightedPoint] = []
    point = [0] * d

    def rec_direct(dim: int, budget: int, weight: float) -> None:
        if dim == d:
            if budget == 0:
                out.append(WeightedPoint(tuple(point), weight))
            return
        for p, pk, logp in coords:
            if pk > budget:
                break
            point[dim] = p
            rec_direct(dim + 1, budget - pk, weight * logp)

    rec_direct(0, lam, 1.0)
    return out


def weighted_count(d: int, k: int, lam: int, odd_only: bool = False) -> float:
    """Sum of log weights over the prime vectors with sum_j p_j^k = lam."""
    return float(sum(wp.weight for wp in enumerate_prime_sphere(d, k, lam, odd_only)))


def prime_power_table(d: int, k: int, limit: int, weighted: bool = True,
                      odd_only: bool = False):
    """Table over lam in [0, limit] of prime-vector counts by power sum.

    weighted=True returns float64 log-weighted counts, else exact int64
    counts.  Computed by d-fold convolution of the one-coordinate table.
    """
    if weighted:
        base = np.zeros(limit + 1, dtype=np.float64)
        for _, pk, logp in _prime_coordinate_values(k, limit, odd_only):
            base[pk] = logp
    else:
        base = np.zeros(limit + 1, dtype=np.int64)
        for _, pk, _ in _prime_coordinate_values(k, limit, odd_only):
            base[pk] = 1
    table = base
    for _ in range(d - 1):
        table = np.convolve(table, base)[: limit + 1]
    return table


@dataclass(frozen=True)
class SumsetResult:
    ok: bool
    modulus: int
    witness: int | None = None
    witness_side: str | None = None  # "sum_only" or "ambient_only"

    def __bool__(self) -> bool:
        return self.ok


def sumset_check(gammas: list[Progression], ambient: Progression) -> SumsetResult:
    """Does the sum of the residue classes equal the ambient class?

    All classes are lifted to M = lcm of the moduli and the sumset is formed
    exhaustively.  On failure the witness is the smallest residue in the
    symmetric difference.
    """
    if not gammas:
        raise ValueError("need at least one slot progression")
    modulus = ambient.modulus
    for g in gammas:
        modulus = math.lcm(modulus, g.modulus)
    total = gammas[0].lift(modulus)
    for g in gammas[1:]:
        lifted = g.lift(modulus)
        total = frozenset((a + b) % modulus for a in total for b in lifted)
    target = ambient.lift(modulus)
    if total == target:
        return SumsetResult(True, modulus)
    extra = sorted(total - target)
    missing = sorted(target - total)
    if extra:
        return SumsetResult(False, modulus, extra[0], "sum_only")
    return SumsetResult(False, modulus, missing[0], "ambient_only")


@dataclass(frozen=True)
class ParityReport:
    lam: int
    vacuous: bool
    solutions: int
    odd_half_solutions: int
    example: tuple | None  # (p, q) with both half sums odd
    example_rearrangement: tuple | None  # (p', q') with both halves even
    failures: tuple  # solutions admitting no even/even rearrangement

    @property
    def ok(self) -> bool:
        return self.vacuous or not self.failures


def _half_parity(vec: tuple[int, ...], k: int) -> int:
    return sum(c**k for c in vec) % 2


def _even_even_rearrangement(coords: list[int], d: int, k: int):
    """Split 2d prime coordinates into two d-halves with even power sums.

    Works by placing an even number of 2s in each half (for even d an odd
    coordinate contributes odd parity, so parity is d - #twos mod 2).
    """
    twos = [c for c in coords if c == 2]
    odds = [c for c in coords if c != 2]
    m = len(twos)
    if m % 2:
        return None
    first_twos = min(m, d)
    if first_twos % 2:
        first_twos -= 1
    if m - first_twos > d:
        return None
    first = twos[:first_twos] + odds[: d - first_twos]
    second = twos[first_twos:] + odds[d - first_twos :]
    if len(first) != d or len(second) != d:
        return None
    p, q = tuple(sorted(first)), tuple(sorted(second))
    if _half_parity(p, k) % 2 or _half_parity(q, k) % 2:
        return None
    return p, q


def parity_rearrangement_check(d: int, k: int, lam: int, bound: int) -> ParityReport:
    """Check the even/even rearrangement property of prime solutions.

    Brute-forces all prime solutions of sum|p_j|^k + sum|q_j|^k = lam with
    coordinates <= bound (d even, k odd, lam even).  Every solution whose
    half sums are odd must admit a rearrangement of its 2d coordinates with
    both half sums even.
    """
    if d % 2 or k % 2 == 0 or lam % 2:
        raise ValueError("requires d even, k odd, lam even")
    primes = [p for p in sieve(bound)]
    halves: dict[int, list[tuple[int, ...]]] = {}

    def rec(dim: int, budget: int, prefix: list[int]) -> None:
        if dim == d:
            halves.setdefault(lam - budget, []).append(tuple(prefix))
            return
        for p in primes:
            if p**k > budget:
                break
            prefix.append(p)
            rec(dim + 1, budget - p**k, prefix)
            prefix.pop()

    rec(0, lam, [])

    solutions = 0
    odd_half = 0
    example = None
    example_fix = None
    failures = []
    for s, ps in sorted(halves.items()):
        t = lam - s
        qs = halves.get(t)
        if qs is None:
            continue
        for p in ps:
            for q in qs:
                solutions += 1
                if _half_parity(p, k) and _half_parity(q, k):
                    odd_half += 1
                    fix = _even_even_rearrangement(sorted(p + q), d, k)
                    if fix is None:
                        failures.append((p, q))
                    elif example is None:
                        example, example_fix = (p, q), fix
    return ParityReport(
        lam=lam,
        vacuous=solutions == 0,
        solutions=solutions,
        odd_half_solutions=odd_half,
        example=example,
        example_rearrangement=example_fix,
        failures=tuple(failures),
    )
