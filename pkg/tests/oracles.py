"""Independent brute-force oracles for the test suite.

Everything here scans boxes or parameter sets directly from the defining
conditions, sharing no code with the library paths under test (aside from
the exact number type used to report results).
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

from slicemax.exactnum import PowerValue


def box_sphere_points(d: int, k: int, lam: int) -> list[tuple[int, ...]]:
    """Full box scan for sum_j |u_j|^k = lam."""
    if lam < 0:
        return []
    r = 0
    while (r + 1) ** k <= lam:
        r += 1
    pts = []
    for u in itertools.product(range(-r, r + 1), repeat=d):
        if sum(abs(c) ** k for c in u) == lam:
            pts.append(u)
    return sorted(pts)


def box_ball_count(d: int, k: int, lam: int) -> int:
    if lam < 0:
        return 0
    r = 0
    while (r + 1) ** k <= lam:
        r += 1
    count = 0
    for u in itertools.product(range(-r, r + 1), repeat=d):
        if sum(abs(c) ** k for c in u) <= lam:
            count += 1
    return count


def annulus_member(s: int, lam: int, theta: Fraction, mult: Fraction) -> bool:
    """Is s in (lam - mult*lam^theta, lam]?  Decided by integer powers."""
    if s > lam:
        return False
    gap = lam - s
    if gap <= 0:
        return True
    p, q = theta.numerator, theta.denominator
    a, b = mult.numerator, mult.denominator
    # gap < (a/b) * lam^(p/q)  <=>  (b*gap)^q < a^q * lam^p
    return (b * gap) ** q < a**q * lam**p


def box_annulus_points(d: int, theta: Fraction, lam: int,
                       mult: Fraction = Fraction(1)) -> list[tuple[int, ...]]:
    r = math.isqrt(lam)
    pts = []
    for u in itertools.product(range(-r, r + 1), repeat=d):
        s = sum(c * c for c in u)
        if annulus_member(s, lam, theta, mult):
            pts.append(u)
    return sorted(pts)


def trial_division_primes(n: int) -> list[int]:
    out = []
    for m in range(2, n + 1):
        for p in range(2, int(math.isqrt(m)) + 1):
            if m % p == 0:
                break
        else:
            out.append(m)
    return out


def progression_members(residue: int, modulus: int, upto: int) -> set[int]:
    return {x for x in range(upto) if x % modulus == residue % modulus}


def exhaustive_sumset_equal(gammas, ambient, modulus: int) -> bool:
    """Compare sumset and ambient membership pointwise over Z/modulus."""
    sums = {0}
    for (a, m) in gammas:
        members = progression_members(a, m, modulus)
        sums = {(x + y) % modulus for x in sums for y in members}
    target = progression_members(ambient[0], ambient[1], modulus)
    return sums == target


def direct_average(family: str, k: int, theta, fs, lam: int, x,
                   phi: Fraction) -> PowerValue:
    """Direct tuple scan of the power-law normalized average at lam."""
    total = Fraction(0)
    for combo in itertools.product(*[list(f.items()) for f in fs]):
        s = 0
        prod = Fraction(1)
        for a, v in combo:
            s += sum(abs(xc - ac) ** k for xc, ac in zip(x, a))
            prod *= v
        if family == "ball":
            ok = s <= lam
        elif family == "sphere":
            ok = s == lam
        else:
            ok = annulus_member(s, lam, theta, Fraction(1))
        if ok:
            total += prod
    if not total:
        return PowerValue(0)
    if lam == 0:
        return PowerValue(total)
    return PowerValue(total, {lam: -phi})


def direct_maximal(family: str, k: int, theta, fs, lambda_set, x,
                   phi: Fraction) -> PowerValue:
    best = PowerValue(0)
    for lam in lambda_set:
        val = direct_average(family, k, theta, fs, lam, x, phi)
        if val.compare(best) > 0:
            best = val
    return best
