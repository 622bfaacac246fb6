"""Exact arithmetic for nonnegative "scaled power" values.

Normalized averages take the shape ``q * b1**e1 * b2**e2`` with ``q`` a
nonnegative rational, the bases positive integers (truncation indices), and
the exponents rationals such as ``-d/2``.  Such values are irrational in
general, but any two of them can be ordered exactly by clearing the exponent
denominators and comparing big rationals.  Every comparison the library makes
(suprema, domination verdicts) goes through this class, so verdicts never
depend on floating point.

Floats are used only as a certified fast path: if two values differ by more
than a coarse relative margin in float64, the float order is trusted (the
conversion error is bounded far below the margin); otherwise the exact
comparison runs.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["PowerValue", "iroot", "ZERO", "ONE"]

# float64 round-off across a handful of pow/mul operations is < 1e-12
# relative; 1e-7 leaves five orders of magnitude of slack.
_FLOAT_MARGIN = 1e-7


def iroot(n: int, k: int) -> int:
    """Largest integer r >= 0 with r**k <= n (n >= 0, k >= 1)."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if k < 1:
        raise ValueError("iroot order must be >= 1")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    # Newton iteration on integers, seeded above the true root.
    r = 1 << -(-n.bit_length() // k)
    while True:
        nr = ((k - 1) * r + n // r ** (k - 1)) // k
        if nr >= r:
            break
        r = nr
    while r ** k > n:
        r -= 1
    while (r + 1) ** k <= n:
        r += 1
    return r


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


class PowerValue:
    """A nonnegative value ``coeff * prod(base**exp)`` with exact ordering.

    ``coeff`` is a nonnegative ``Fraction``; ``powers`` maps positive integer
    bases to nonzero rational exponents.  The zero value has no factors.
    """

    __slots__ = ("coeff", "powers", "_float")

    def __init__(self, coeff, powers=()):
        c = _as_fraction(coeff)
        if c < 0:
            raise ValueError("PowerValue must be nonnegative")
        merged: dict[int, Fraction] = {}
        if c:
            for base, exp in dict(powers).items():
                if not isinstance(base, int) or base <= 0:
                    raise ValueError(f"base must be a positive integer, got {base!r}")
                e = _as_fraction(exp)
                if base == 1 or e == 0:
                    continue
                q = e.denominator
                if q > 1:
                    # canonicalize perfect powers: (r**q)**(p/q) = r**p
                    r = iroot(base, q)
                    if r**q == base:
                        base, e = r, Fraction(e.numerator)
                        if base == 1:
                            continue
                e = merged.get(base, Fraction(0)) + e
                if e:
                    merged[base] = e
                else:
                    merged.pop(base, None)
            for base in list(merged):
                if merged[base].denominator == 1:
                    c *= Fraction(base) ** int(merged.pop(base))
        self.coeff = c
        self.powers = tuple(sorted(merged.items()))
        self._float = None

    # -- constructors -------------------------------------------------

    @classmethod
    def scaled(cls, coeff, base: int, exp) -> "PowerValue":
        return cls(coeff, {base: _as_fraction(exp)})

    @classmethod
    def of(cls, value) -> "PowerValue":
        if isinstance(value, PowerValue):
            return value
        return cls(value)

    # -- conversions ---------------------------------------------------

    def is_rational(self) -> bool:
        return all(e.denominator == 1 for _, e in self.powers)

    def as_fraction(self) -> Fraction:
        """Exact rational value; raises if any exponent is fractional."""
        out = self.coeff
        for base, exp in self.powers:
            if exp.denominator != 1:
                raise ValueError(f"irrational value: base {base} has exponent {exp}")
            out *= Fraction(base) ** int(exp)
        return out

    def __float__(self) -> float:
        if self._float is None:
            x = self.coeff.numerator / self.coeff.denominator
            for base, exp in self.powers:
                x *= math.pow(base, exp.numerator / exp.denominator)
            self._float = x
        return self._float

    # -- arithmetic ----------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, PowerValue):
            if not self.coeff or not other.coeff:
                return ZERO
            merged = dict(self.powers)
            for base, exp in other.powers:
                e = merged.get(base, Fraction(0)) + exp
                if e:
                    merged[base] = e
                else:
                    merged.pop(base, None)
            return PowerValue(self.coeff * other.coeff, merged)
        return PowerValue(self.coeff * _as_fraction(other), dict(self.powers))

    __rmul__ = __mul__

    # -- exact ordering --------------------------------------------------

    def _exact_cmp(self, other: "PowerValue") -> int:
        if not self.coeff or not other.coeff:
            return (self.coeff > other.coeff) - (self.coeff < other.coeff)
        dens = [e.denominator for _, e in self.powers]
        dens += [e.denominator for _, e in other.powers]
        scale = math.lcm(*dens) if dens else 1
        lhs = self.coeff**scale
        rhs = other.coeff**scale
        for base, exp in self.powers:
            lhs *= Fraction(base) ** int(exp * scale)
        for base, exp in other.powers:
            rhs *= Fraction(base) ** int(exp * scale)
        return (lhs > rhs) - (lhs < rhs)

    def compare(self, other) -> int:
        """-1, 0, +1 ordering; float fast path, exact fallback."""
        other = PowerValue.of(other)
        fa, fb = float(self), float(other)
        if fa < fb * (1.0 - _FLOAT_MARGIN):
            return -1
        if fb < fa * (1.0 - _FLOAT_MARGIN):
            return 1
        return self._exact_cmp(other)

    def __eq__(self, other):
        if isinstance(other, (PowerValue, int, Fraction)):
            return self.compare(other) == 0
        return NotImplemented

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __hash__(self):
        if self.is_rational():
            return hash(self.as_fraction())
        return hash((self.coeff, self.powers))

    def __bool__(self):
        return bool(self.coeff)

    def __repr__(self):
        if not self.powers:
            return f"PowerValue({self.coeff})"
        factors = " * ".join(f"{b}^({e})" for b, e in self.powers)
        return f"PowerValue({self.coeff} * {factors})"

    def exact_str(self) -> str:
        """Stable textual form: a fraction, or coeff * base^(p/q) factors."""
        if self.is_rational():
            return str(self.as_fraction())
        factors = "*".join(f"{b}^({e})" for b, e in self.powers)
        return f"{self.coeff}*{factors}"


ZERO = PowerValue(0)
ONE = PowerValue(1)


def max_power_value(candidates) -> PowerValue:
    """Exact maximum of an iterable of PowerValues (first wins ties)."""
    best = None
    for cand in candidates:
        if best is None or cand.compare(best) > 0:
            best = cand
    if best is None:
        return ZERO
    return best
