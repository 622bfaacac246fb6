"""slicemax: discrete multilinear averaging operators on integer lattices.

Exact enumeration and counting of lattice surfaces (balls, k-spheres,
annuli, prime spheres), the associated multilinear averaging and maximal
operators, pointwise slice-and-dice domination checks in exact arithmetic,
Dirac-delta sharpness experiments, and a structural checker for the
conditions that make the slicing decomposition work.
"""

from .exactnum import PowerValue, iroot
from .gridfn import GridFunction
from .primes import Progression, sieve
from .surfaces import SurfaceSpec

__all__ = [
    "PowerValue",
    "iroot",
    "GridFunction",
    "Progression",
    "sieve",
    "SurfaceSpec",
]

__version__ = "0.1.0"
