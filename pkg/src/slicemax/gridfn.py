"""Finitely supported nonnegative rational functions on Z^d."""

from __future__ import annotations

from fractions import Fraction

__all__ = ["GridFunction"]


def _as_value(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"grid values must be exact rationals, got {type(v).__name__}")


class GridFunction:
    """Immutable map from lattice points to positive rationals.

    Zero values are never stored; lookups outside the support return 0.
    """

    __slots__ = ("dim", "_values")

    def __init__(self, dim: int, values=()):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        store: dict[tuple[int, ...], Fraction] = {}
        for point, value in dict(values).items():
            pt = tuple(int(c) for c in point)
            if len(pt) != dim:
                raise ValueError(f"point {pt} does not have dimension {dim}")
            val = _as_value(value)
            if val < 0:
                raise ValueError(f"negative value {val} at {pt}")
            if val:
                store[pt] = val
        self.dim = dim
        self._values = dict(sorted(store.items()))

    # -- constructors ---------------------------------------------------

    @classmethod
    def delta(cls, dim: int, at=None) -> "GridFunction":
        point = tuple([0] * dim) if at is None else tuple(at)
        return cls(dim, {point: 1})

    @classmethod
    def zero(cls, dim: int) -> "GridFunction":
        return cls(dim, {})

    # -- queries ----------------------------------------------------------

    def __call__(self, point) -> Fraction:
        return self._values.get(tuple(point), Fraction(0))

    def support(self) -> list[tuple[int, ...]]:
        return list(self._values)

    def items(self):
        return self._values.items()

    def __len__(self) -> int:
        return len(self._values)

    def __bool__(self) -> bool:
        return bool(self._values)

    def __eq__(self, other):
        if not isinstance(other, GridFunction):
            return NotImplemented
        return self.dim == other.dim and self._values == other._values

    def __hash__(self):
        return hash((self.dim, tuple(self._values.items())))

    def __reduce__(self):
        return (GridFunction, (self.dim, self._values))

    def total_mass(self) -> Fraction:
        return sum(self._values.values(), Fraction(0))

    def is_integer_valued(self) -> bool:
        return all(v.denominator == 1 for v in self._values.values())

    def bounding_box(self):
        """(lo, hi) coordinate-wise bounds of the support; None if empty."""
        if not self._values:
            return None
        pts = list(self._values)
        lo = tuple(min(p[j] for p in pts) for j in range(self.dim))
        hi = tuple(max(p[j] for p in pts) for j in range(self.dim))
        return lo, hi

    # -- algebra -----------------------------------------------------------

    def shift(self, vector) -> "GridFunction":
        vec = tuple(vector)
        return GridFunction(
            self.dim,
            {tuple(c + v for c, v in zip(p, vec)): x for p, x in self._values.items()},
        )

    def scale(self, factor) -> "GridFunction":
        factor = _as_value(factor)
        return GridFunction(self.dim, {p: factor * x for p, x in self._values.items()})

    # -- serialization: one line per point, "x1 ... xd num/den" ------------

    def dumps(self) -> str:
        lines = []
        for point, value in self._values.items():
            coords = " ".join(str(c) for c in point)
            lines.append(f"{coords} {value.numerator}/{value.denominator}")
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def loads(cls, text: str, dim: int | None = None) -> "GridFunction":
        values: dict[tuple[int, ...], Fraction] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if dim is None:
                dim = len(parts) - 1
                if dim < 1:
                    raise ValueError(f"line {lineno}: need coordinates and a value")
            if len(parts) != dim + 1:
                raise ValueError(f"line {lineno}: expected {dim} coordinates and a value")
            point = tuple(int(c) for c in parts[:-1])
            value = Fraction(parts[-1])
            if value < 0:
                raise ValueError(f"line {lineno}: negative value {parts[-1]}")
            if point in values:
                raise ValueError(f"line {lineno}: duplicate point {point}")
            if value:
                values[point] = value
        if dim is None:
            raise ValueError("empty grid function needs an explicit dimension")
        return cls(dim, values)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.dumps())

    @classmethod
    def load(cls, path, dim: int | None = None) -> "GridFunction":
        with open(path, encoding="utf-8") as fh:
            return cls.loads(fh.read(), dim)

    def __repr__(self):
        return f"GridFunction(dim={self.dim}, support={len(self._values)})"
