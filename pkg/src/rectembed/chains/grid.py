"""Cubical grids with unequal spacings and integer cellular chains on them."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple

from ..errors import CapacityError, GridError

DEFAULT_CAPACITY = 10**6
MAX_SPACING_RATIO = 2.0


def capacity() -> int:
    return int(os.environ.get("RECTEMBED_CAPACITY", DEFAULT_CAPACITY))


@dataclass(frozen=True)
class CubicalGrid:
    n: int
    cells_per_axis: tuple[int, ...]
    spacings: tuple[tuple[float, ...], ...]
    coords: tuple[tuple[float, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        m = tuple(int(x) for x in self.cells_per_axis)
        sp = tuple(tuple(float(s) for s in axis) for axis in self.spacings)
        if self.n != len(m) or self.n != len(sp):
            raise GridError("grid axis count mismatch")
        for a, (ma, sa) in enumerate(zip(m, sp)):
            if ma < 1 or len(sa) != ma:
                raise GridError(f"axis {a}: need {ma} >= 1 spacings, got {len(sa)}")
            if any(not (s > 0 and math.isfinite(s)) for s in sa):
                raise GridError(f"axis {a}: spacings must be positive")
            if max(sa) > MAX_SPACING_RATIO * min(sa) * (1 + 1e-12):
                raise GridError(f"axis {a}: spacing ratio exceeds {MAX_SPACING_RATIO}")
        total = math.prod(2 * ma + 1 for ma in m)
        if total > capacity():
            raise CapacityError(f"grid has {total} cells, capacity {capacity()}")
        object.__setattr__(self, "cells_per_axis", m)
        object.__setattr__(self, "spacings", sp)
        coords = []
        for sa in sp:
            c = [0.0]
            for s in sa:
                c.append(c[-1] + s)
            coords.append(tuple(c))
        object.__setattr__(self, "coords", tuple(coords))

    @classmethod
    def uniform(cls, dims, cells) -> "CubicalGrid":
        """Equal spacing per axis: ``cells[a]`` slots of width dims[a] / cells[a]."""
        if isinstance(cells, int):
            cells = [cells] * len(dims)
        return cls(len(dims), tuple(cells), tuple((d / c,) * c for d, c in zip(dims, cells)))

    @property
    def dims(self) -> tuple[float, ...]:
        return tuple(c[-1] for c in self.coords)

    def drop_axis(self, a: int) -> "CubicalGrid":
        keep = [i for i in range(self.n) if i != a]
        return CubicalGrid(self.n - 1, tuple(self.cells_per_axis[i] for i in keep), tuple(self.spacings[i] for i in keep))

    def cells(self, p: int) -> Iterator["Cell"]:
        """Every p-cell in lexicographic order."""
        from itertools import combinations, product

        for dirs in combinations(range(self.n), p):
            ranges = [range(self.cells_per_axis[a] + (0 if a in dirs else 1)) for a in range(self.n)]
            for base in product(*ranges):
                yield Cell(base, dirs)

    def to_json(self) -> dict:
        return {"n": self.n, "cells_per_axis": list(self.cells_per_axis), "spacings_per_axis": [list(s) for s in self.spacings]}

    @classmethod
    def from_json(cls, obj) -> "CubicalGrid":
        return cls(int(obj["n"]), tuple(obj["cells_per_axis"]), tuple(tuple(s) for s in obj["spacings_per_axis"]))


class Cell(NamedTuple):
    base: tuple[int, ...]
    dirs: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.dirs)


def cell_valid(c: Cell, grid: CubicalGrid) -> bool:
    if len(c.base) != grid.n or list(c.dirs) != sorted(set(c.dirs)):
        return False
    for a, t in enumerate(c.base):
        hi = grid.cells_per_axis[a] - (1 if a in c.dirs else 0)
        if not 0 <= t <= hi:
            return False
    return all(0 <= a < grid.n for a in c.dirs)


def cell_measure(c: Cell, grid: CubicalGrid) -> float:
    return math.prod(grid.spacings[a][c.base[a]] for a in c.dirs)


def on_boundary(c: Cell, grid: CubicalGrid) -> bool:
    """True when the cell lies in the outer boundary of the grid's rectangle."""
    for a, t in enumerate(c.base):
        if a not in c.dirs and (t == 0 or t == grid.cells_per_axis[a]):
            return True
    return False


@dataclass(frozen=True)
class CubicalChain:
    p: int
    coeffs: Mapping[Cell, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for c, v in dict(self.coeffs).items():
            v = int(v)
            if not isinstance(c, Cell):
                c = Cell(tuple(c[0]), tuple(c[1]))
            if len(c.dirs) != self.p:
                raise GridError(f"cell {c} has dimension {len(c.dirs)}, chain has {self.p}")
            if v:
                clean[c] = v
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def zero(cls, p: int) -> "CubicalChain":
        return cls(p, {})

    @classmethod
    def from_cells(cls, p: int, items: Iterable) -> "CubicalChain":
        acc: dict[Cell, int] = {}
        for c, v in items:
            acc[c] = acc.get(c, 0) + v
        return cls(p, acc)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(sorted(self.coeffs.items()))

    def _combine(self, other: "CubicalChain", sign: int) -> "CubicalChain":
        if other.p != self.p and other.coeffs and self.coeffs:
            raise GridError("adding chains of different dimension")
        acc = dict(self.coeffs)
        for c, v in other.coeffs.items():
            acc[c] = acc.get(c, 0) + sign * v
        return CubicalChain(self.p if self.coeffs or not other.coeffs else other.p, acc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return CubicalChain(self.p, {c: -v for c, v in self.coeffs.items()})

    def __rmul__(self, k: int):
        return CubicalChain(self.p, {c: k * v for c, v in self.coeffs.items()})

    def __eq__(self, other):
        if not isinstance(other, CubicalChain):
            return NotImplemented
        if not self.coeffs and not other.coeffs:
            return True
        return self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, frozenset(self.coeffs.items())))

    def to_json(self) -> dict:
        return {"p": self.p, "cells": [{"base": list(c.base), "dirs": list(c.dirs), "coef": v} for c, v in self]}

    @classmethod
    def from_json(cls, obj) -> "CubicalChain":
        return cls(int(obj["p"]), {Cell(tuple(d["base"]), tuple(d["dirs"])): int(d["coef"]) for d in obj["cells"]})


def check_chain(z: CubicalChain, grid: CubicalGrid) -> None:
    for c in z.coeffs:
        if not cell_valid(c, grid):
            raise GridError(f"cell {c} is not a cell of the grid")


def boundary(z: CubicalChain, grid: CubicalGrid | None = None) -> CubicalChain:
    """Cubical boundary: sum over directions of (-1)^i (upper face - lower face)."""
    if z.p == 0:
        return CubicalChain.zero(-1)
    acc: dict[Cell, int] = {}
    for c, v in z.coeffs.items():
        for i, a in enumerate(c.dirs):
            fd = c.dirs[:i] + c.dirs[i + 1 :]
            s = v if i % 2 == 0 else -v
            up = c.base[:a] + (c.base[a] + 1,) + c.base[a + 1 :]
            lo = Cell(c.base, fd)
            hi = Cell(up, fd)
            acc[hi] = acc.get(hi, 0) + s
            acc[lo] = acc.get(lo, 0) - s
    return CubicalChain(z.p - 1, acc)


def rel(z: CubicalChain, grid: CubicalGrid) -> CubicalChain:
    """Drop cells supported in the outer boundary (the relative chain)."""
    return CubicalChain(z.p, {c: v for c, v in z.coeffs.items() if not on_boundary(c, grid)})


def volume(z: CubicalChain, grid: CubicalGrid) -> float:
    return math.fsum(abs(v) * cell_measure(c, grid) for c, v in z.coeffs.items())


def is_relative_cycle(z: CubicalChain, grid: CubicalGrid) -> bool:
    return rel(boundary(z), grid).is_zero()


def equal_mod_boundary(a: CubicalChain, b: CubicalChain, grid: CubicalGrid) -> bool:
    return rel(a - b, grid).is_zero()
