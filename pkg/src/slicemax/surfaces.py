"""Surface families and their parameter bundles.

A ``SurfaceSpec`` names one averaging surface family over Z^(ell*d):

* ``ball``           sum_i |u_i|_k <= lam (degree-k ball; |u|_k = sum_j |u_j|^k)
* ``sphere``         sum_i |u_i|_k  = lam
* ``annulus``        lam - lam^theta < sum_i |u_i|^2 <= lam
* ``prime_sphere``   sum_i |p_i|_k  = lam over positive prime vectors,
                     log-weighted, with per-slot and ambient residue classes
* ``prime_ball``     the cumulative (<=) prime variant
* ``general_additive``  user-supplied additive components, for the
                     framework checker only
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .primes import Progression

__all__ = ["SurfaceSpec", "FAMILIES", "PRIME_FAMILIES", "power_law_exponent"]

FAMILIES = ("ball", "sphere", "annulus", "prime_sphere", "prime_ball",
            "general_additive")
PRIME_FAMILIES = ("prime_sphere", "prime_ball")


@dataclass(frozen=True)
class SurfaceSpec:
    family: str
    d: int
    ell: int
    k: int = 2
    theta: Fraction | None = None
    progressions: tuple[Progression, ...] | None = None  # one per slot
    ambient: Progression | None = None
    components: tuple | None = None  # general_additive: one h_i per slot

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.d < 1:
            raise ValueError("d must be >= 1")
        if self.ell < 1:
            raise ValueError("ell must be >= 1")
        min_k = 1 if self.family == "ball" else 2
        if self.k < min_k:
            raise ValueError(f"family {self.family} needs k >= {min_k}")
        if (self.theta is not None) != (self.family == "annulus"):
            raise ValueError("theta is present exactly for the annulus family")
        if self.theta is not None:
            if not isinstance(self.theta, Fraction) or not 0 < self.theta < 1:
                raise ValueError("theta must be a Fraction in (0, 1)")
            if self.k != 2:
                raise ValueError("annuli are defined for squared norms (k = 2)")
        if self.progressions is not None:
            if self.family not in PRIME_FAMILIES:
                raise ValueError("progressions apply to prime families only")
            if len(self.progressions) != self.ell:
                raise ValueError("need one progression per slot")
            if self.ambient is None:
                raise ValueError("slot progressions require an ambient progression")
        if (self.components is not None) != (self.family == "general_additive"):
            raise ValueError("components are present exactly for general_additive")
        if self.components is not None and len(self.components) != self.ell:
            raise ValueError("need one component per slot")

    @property
    def is_prime(self) -> bool:
        return self.family in PRIME_FAMILIES

    @property
    def cumulative(self) -> bool:
        """True when the surface constraint is <= lam rather than = lam."""
        return self.family in ("ball", "prime_ball")

    def slot_progression(self, i: int) -> Progression | None:
        if self.progressions is None:
            return None
        return self.progressions[i]

    def describe(self) -> str:
        bits = [f"{self.family}", f"d={self.d}", f"ell={self.ell}", f"k={self.k}"]
        if self.theta is not None:
            bits.append(f"theta={self.theta}")
        if self.ambient is not None:
            bits.append(f"lam in {self.ambient}")
        return " ".join(bits)


def power_law_exponent(spec: SurfaceSpec) -> Fraction:
    """Exponent phi of the default lam^(-phi) normalization over Z^(ell*d).

    Matches the lattice-count growth of each family: ball lam^(ld/k), sphere
    lam^(ld/k - 1), annulus lam^(ld/2 - 1 + theta), prime families as their
    integer counterparts.
    """
    ld = Fraction(spec.ell * spec.d)
    if spec.family in ("ball", "prime_ball"):
        return ld / spec.k
    if spec.family in ("sphere", "prime_sphere"):
        return ld / spec.k - 1
    if spec.family == "annulus":
        return ld / 2 - 1 + spec.theta
    raise ValueError(f"no power-law normalization for family {spec.family!r}")
