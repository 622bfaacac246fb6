"""Exact lattice point enumeration and counting on the surface families.

Everything here is integer arithmetic: annulus membership at irrational
cutoffs lam - w*lam^theta is decided by raising both sides to the
denominator of theta, and counts are exact (int64 through the kernels, big
ints on the rare overflow-risk path).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .exactnum import iroot
from .primes import prime_power_table
from .surfaces import SurfaceSpec

__all__ = [
    "enumerate_sphere",
    "count_sphere",
    "count_ball",
    "annulus_lower_cutoff",
    "enumerate_annulus",
    "count_annulus",
    "sphere_count_table",
    "ball_count_table",
    "surface_count_table",
    "AsymptoticDiagnostic",
    "asymptotic_diagnostic",
]

# above this box population the int64 kernels could overflow; use big ints
_INT64_SAFE = 1 << 62


def _box_population_bound(d: int, k: int, lam: int) -> int:
    return (2 * iroot(max(lam, 0), k) + 1) ** d


def enumerate_sphere(d: int, k: int, lam: int) -> list[tuple[int, ...]]:
    """All u in Z^d with sum_j |u_j|^k = lam, ascending lex order."""
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    if lam < 0:
        return []
    return kernels.enumerate_sphere(d, k, lam)


def count_sphere(d: int, k: int, lam: int) -> int:
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    if lam < 0:
        return 0
    if _box_population_bound(d, k, lam) < _INT64_SAFE:
        return kernels.count_sphere(d, k, lam)
    return int(sphere_count_table(d, k, lam, big=True)[lam])


def count_ball(d: int, k: int, lam: int) -> int:
    """Exact #{u in Z^d : sum_j |u_j|^k <= lam}."""
    if d < 1 or k < 1:
        raise ValueError("need d >= 1 and k >= 1")
    if lam < 0:
        return 0
    if _box_population_bound(d, k, lam) < _INT64_SAFE:
        return kernels.count_ball(d, k, lam)
    table = sphere_count_table(d, k, lam, big=True)
    return int(sum(table))


def sphere_count_table(d: int, k: int, limit: int, big: bool = False):
    """Counts of sum_j |u_j|^k = lam for all lam in [0, limit].

    d-fold additive convolution of the one-coordinate table; int64 when safe,
    Python big ints otherwise.
    """
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if not big and _box_population_bound(d, k, limit) >= _INT64_SAFE:
        big = True
    dtype = object if big else np.int64
    base = np.zeros(limit + 1, dtype=dtype)
    base[0] = 1
    for c in range(1, iroot(limit, k) + 1):
        base[c**k] = 2
    table = base
    for _ in range(d - 1):
        table = np.convolve(table, base)[: limit + 1]
    return table


def ball_count_table(d: int, k: int, limit: int):
    """Cumulative variant of sphere_count_table."""
    return np.cumsum(sphere_count_table(d, k, limit))


def annulus_lower_cutoff(lam: int, theta: Fraction, mult: Fraction = Fraction(1)) -> int:
    """Largest integer s excluded below the annulus at lam.

    The annulus of width mult*lam^theta is {s : cutoff < s <= lam} in terms
    of the squared norm s.  Exclusion of s means mult*lam^theta <= lam - s,
    decided exactly as (b*(lam-s))^q >= a^q * lam^p for theta = p/q and
    mult = a/b.
    """
    if lam < 1:
        raise ValueError("lam must be >= 1")
    if not 0 < theta < 1:
        raise ValueError("theta must lie in (0, 1)")
    if mult <= 0:
        raise ValueError("width multiplier must be positive")
    p, q = theta.numerator, theta.denominator
    a, b = mult.numerator, mult.denominator
    rhs = a**q * lam**p
    t = iroot(rhs, q)
    # smallest m = lam - s with (b*m)^q >= rhs
    if t**q == rhs:
        m_star = -(-t // b)
    else:
        m_star = -(-(t + 1) // b)
    return lam - m_star


def enumerate_annulus(
    d: int, theta: Fraction, lam: int, width_multiplier: Fraction = Fraction(1)
) -> list[tuple[int, ...]]:
    """Lattice points with lam - mult*lam^theta < |x|^2 <= lam, lex order."""
    cutoff = annulus_lower_cutoff(lam, theta, width_multiplier)
    out: list[tuple[int, ...]] = []
    for s in range(max(cutoff + 1, 0), lam + 1):
        out.extend(kernels.enumerate_sphere(d, 2, s))
    out.sort()
    return out


def count_annulus(
    d: int, theta: Fraction, lam: int, width_multiplier: Fraction = Fraction(1)
) -> int:
    cutoff = annulus_lower_cutoff(lam, theta, width_multiplier)
    table = np.cumsum(sphere_count_table(d, 2, lam))
    total = int(table[lam])
    if cutoff >= 0:
        total -= int(table[cutoff])
    return total


def surface_count_table(spec: SurfaceSpec, limit: int):
    """Counts (weighted for prime families) over Z^(ell*d) for lam <= limit."""
    dim = spec.ell * spec.d
    if spec.family == "ball":
        return ball_count_table(dim, spec.k, limit)
    if spec.family == "sphere":
        return sphere_count_table(dim, spec.k, limit)
    if spec.family == "annulus":
        cum = np.cumsum(sphere_count_table(dim, 2, limit))
        out = np.zeros(limit + 1, dtype=cum.dtype)
        for lam in range(1, limit + 1):
            cutoff = annulus_lower_cutoff(lam, spec.theta)
            out[lam] = cum[lam] - (cum[cutoff] if cutoff >= 0 else 0)
        return out
    if spec.family == "prime_sphere":
        return prime_power_table(dim, spec.k, limit, weighted=True)
    if spec.family == "prime_ball":
        return np.cumsum(prime_power_table(dim, spec.k, limit, weighted=True))
    raise ValueError(f"no count table for family {spec.family!r}")


@dataclass(frozen=True)
class AsymptoticDiagnostic:
    lambdas: tuple[int, ...]
    counts: tuple
    phi: Fraction
    ratios: tuple[float, ...]
    stabilization: float

    def stable_within(self, tol: float) -> bool:
        return self.stabilization <= tol


def asymptotic_diagnostic(spec: SurfaceSpec, lambdas, phi: Fraction) -> AsymptoticDiagnostic:
    """Ratios count(lam)/lam^phi and how much their top half still moves.

    stabilization = max over the top half of |ratio_i/ratio_last - 1|; a
    correct growth exponent drives it toward 0, a wrong one does not.
    """
    lams = [int(x) for x in lambdas]
    if not lams:
        raise ValueError("lambda sequence must be nonempty")
    if any(b <= a for a, b in zip(lams, lams[1:])):
        raise ValueError("lambda sequence must be strictly increasing")
    if lams[0] < 1:
        raise ValueError("lambdas must be >= 1")
    table = surface_count_table(spec, lams[-1])
    counts = [table[lam] for lam in lams]
    phi = Fraction(phi)
    ratios = [
        float(c) / math.pow(lam, phi.numerator / phi.denominator)
        for c, lam in zip(counts, lams)
    ]
    last = ratios[-1]
    top = ratios[len(ratios) // 2 :]
    if last == 0.0:
        stab = 0.0 if all(r == 0.0 for r in top) else math.inf
    else:
        stab = max(abs(r / last - 1.0) for r in top)
    counts_out = tuple(
        float(c) if isinstance(c, (float, np.floating)) else int(c) for c in counts
    )
    return AsymptoticDiagnostic(tuple(lams), counts_out, phi, tuple(ratios), stab)
