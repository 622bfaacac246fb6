"""Kernel backend selection.

The compiled Cython core is used when the extension is importable; otherwise
the pure-Python twin takes over.  Both expose the same functions with
bit-identical results, so everything above this layer is backend-agnostic.
``set_backend``/``get_backend`` exist for tests and the benchmark, which
compare the two sides directly.
"""

from __future__ import annotations

from . import purekernels

try:  # pragma: no cover - depends on whether the extension was built
    from . import corekernels
except ImportError:  # pragma: no cover
    corekernels = None

_active = corekernels if corekernels is not None else purekernels

BACKENDS = {"pure": purekernels}
if corekernels is not None:
    BACKENDS["compiled"] = corekernels


def get_backend() -> str:
    return _active.NAME


def set_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {sorted(BACKENDS)}")
    _active = BACKENDS[name]


def count_sphere(d, k, lam):
    return _active.count_sphere(d, k, lam)


def count_ball(d, k, lam):
    return _active.count_ball(d, k, lam)


def enumerate_sphere(d, k, lam):
    return _active.enumerate_sphere(d, k, lam)


def profile_hist(points, values, x, k, limit):
    return _active.profile_hist(points, values, x, k, limit)


def tuple_hist_batch(slot_points, slot_values, xs, k, limit):
    return _active.tuple_hist_batch(slot_points, slot_values, xs, k, limit)
