"""Critical and sufficient Lebesgue exponents, and bilinear boundedness regions.

All values are exact rationals.  ``critical_r`` is the necessary-condition
threshold each family's Dirac-delta example produces; the ``*_threshold``
functions evaluate the sufficient-range formulas in terms of externally
supplied constants (delta0, p_kd), which this library treats as inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

__all__ = [
    "critical_r",
    "sphere_r0",
    "sphere_linear_p0",
    "annulus_linear_p0",
    "sphere_r_threshold",
    "waring_goldbach_r_threshold",
    "framework_bilinear_r_threshold",
    "sufficient_r_and_p",
    "ExponentRegion",
    "boundedness_region",
    "region_vertices",
    "region_contains",
]


def critical_r(family: str, d: int, k: int = 2, ell: int = 2,
               theta: Fraction | None = None) -> Fraction:
    """Necessary lower threshold on r for the family's maximal operator.

    ball 1/ell; sphere and prime_sphere d/(ell*d - k); annulus
    d/(ell*d - 2 + 2*theta).
    """
    if family == "ball":
        return Fraction(1, ell)
    if family in ("sphere", "prime_sphere"):
        if ell * d <= k:
            raise ValueError(f"need ell*d > k, got ell*d={ell * d}, k={k}")
        return Fraction(d, ell * d - k)
    if family == "annulus":
        if theta is None or not 0 < theta < 1:
            raise ValueError("annulus needs theta in (0, 1)")
        denom = ell * d - 2 + 2 * theta
        if denom <= 0:
            raise ValueError("need ell*d - 2 + 2*theta > 0")
        return Fraction(d) / denom
    raise ValueError(f"no critical exponent for family {family!r}")


def sphere_r0(delta0: Fraction, ell: int = 2) -> Fraction:
    """r_0 = (2+2*delta0) / ((ell-1)(2+2*delta0) + (1+2*delta0))."""
    delta0 = Fraction(delta0)
    if delta0 < 0:
        raise ValueError("delta0 must be >= 0")
    a = 2 + 2 * delta0
    return a / ((ell - 1) * a + (1 + 2 * delta0))


def sphere_linear_p0(d: int, k: int, delta0: Fraction) -> Fraction:
    """p_0 = max{1 + 1/(1+2*delta0), d/(d-k)} for the linear degree-k operator."""
    delta0 = Fraction(delta0)
    if d <= k:
        raise ValueError(f"p_0 needs d > k, got d={d}, k={k}")
    return max(1 + Fraction(1, 1) / (1 + 2 * delta0), Fraction(d, d - k))


def annulus_linear_p0(theta: Fraction, d: int) -> Fraction:
    """p_0(theta, d) = d/(d - 2 + 2*theta) for the linear annular operator.

    Interpolates the cumulative (theta -> 0: d/(d-2)) and spherical
    (theta -> 1: 1) endpoints; defined here for theta in [0, 1].
    """
    theta = Fraction(theta)
    if not 0 <= theta <= 1:
        raise ValueError("theta must lie in [0, 1]")
    denom = d - 2 + 2 * theta
    if denom <= 0:
        raise ValueError("need d - 2 + 2*theta > 0")
    return Fraction(d) / denom


def sphere_r_threshold(d: int, k: int, ell: int, delta0: Fraction) -> Fraction:
    """Sufficient threshold max{r_0, d/(ell*d - k)} for degree-k spheres."""
    return max(sphere_r0(delta0, ell), critical_r("sphere", d, k, ell))


def waring_goldbach_r_threshold(p_kd: Fraction, ell: int = 2) -> Fraction:
    """Sufficient threshold p_kd / ((ell-1) * p_kd + 1) for prime spheres."""
    p_kd = Fraction(p_kd)
    if p_kd <= 1:
        raise ValueError("p_kd must exceed 1")
    return p_kd / ((ell - 1) * p_kd + 1)


def framework_bilinear_r_threshold(p_d: Fraction) -> Fraction:
    """General bilinear threshold p_d / (2*p_d + 1) from the slicing framework."""
    p_d = Fraction(p_d)
    if p_d <= 1:
        raise ValueError("p_d must exceed 1")
    return p_d / (2 * p_d + 1)


def sufficient_r_and_p(family: str, d: int, k: int, ell: int,
                       delta0: Fraction, p_kd: Fraction):
    """(r_0, p_0, r_threshold) for the family with supplied constants.

    delta0 and p_kd come from configuration; they are inputs here, not
    derived quantities.
    """
    r0 = sphere_r0(delta0, ell)
    p0 = sphere_linear_p0(d, k, delta0)
    if family == "sphere":
        threshold = sphere_r_threshold(d, k, ell, delta0)
    elif family == "prime_sphere":
        threshold = waring_goldbach_r_threshold(p_kd, ell)
    elif family == "ball":
        threshold = Fraction(1, ell)
    else:
        raise ValueError(f"no sufficient threshold for family {family!r}")
    return r0, p0, threshold


# ---------------------------------------------------------------------------
# bilinear (1/p, 1/q) regions


@dataclass(frozen=True)
class ExponentRegion:
    """Bilinear boundedness region in the open unit square of (1/p, 1/q).

    The region is {0 <= 1/p < 1, 0 <= 1/q < 1, 1/p + 1/q < threshold} with
    the boundary open on the critical lines.
    """

    family: str
    d: int
    k: int
    ell: int
    theta: Fraction | None
    threshold: Fraction
    vertices: tuple

    def contains(self, point, r: Fraction | None = None, strict: bool = True) -> bool:
        u, v = Fraction(point[0]), Fraction(point[1])
        if not (0 <= u <= 1 and 0 <= v <= 1):
            return False

        def less(x, y):
            return x < y if strict else x <= y

        if not (less(u, 1) and less(v, 1) and less(u + v, self.threshold)):
            return False
        if r is not None:
            r = Fraction(r)
            rc = critical_r(self.family, self.d, self.k, self.ell, self.theta)
            hoelder = u + v >= Fraction(1) / r
            above = r > rc if strict else r >= rc
            return hoelder and above
        return True


def _hoelder_threshold(family: str, d: int, k: int, theta) -> Fraction:
    if family == "ball":
        return Fraction(2)
    if family == "sphere":
        return 1 + Fraction(d - k, d)
    if family == "annulus":
        return 1 + Fraction(d - 2) / d + 2 * Fraction(theta) / d
    raise ValueError(f"no bilinear region for family {family!r}")


def boundedness_region(family: str, d: int, k: int = 2,
                       theta: Fraction | None = None) -> ExponentRegion:
    threshold = _hoelder_threshold(family, d, k, theta)
    one = Fraction(1)
    zero = Fraction(0)
    if family == "ball":
        verts = ((zero, zero), (one, zero), (one, one), (zero, one))
    else:
        cut = threshold - 1  # the top-edge breakpoint ((d-2+2*theta)/d etc.)
        verts = ((zero, zero), (zero, one), (cut, one), (one, cut), (one, zero))
    return ExponentRegion(family, d, k, 2, theta, threshold, verts)


def region_vertices(family: str, d: int, k: int = 2, theta: Fraction | None = None):
    return boundedness_region(family, d, k, theta).vertices


def region_contains(family: str, d: int, point, k: int = 2,
                    theta: Fraction | None = None, r: Fraction | None = None,
                    strict: bool = True) -> bool:
    return boundedness_region(family, d, k, theta).contains(point, r, strict)
