"""Constructive fillings and lattice pushes built from one prism operator.

``sweep`` applies a monotone vertex map g along one axis and returns the pushed chain f#z together with the prism chain Hz, which
satisfy z - f#z = dHz + Hdz exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError, GridError, InvariantViolation
from ..isoperimetry import profile_upper
from .grid import Cell, CubicalChain, CubicalGrid, boundary, check_chain, is_relative_cycle, on_boundary, rel, volume


def sweep(z: CubicalChain, grid: CubicalGrid, axis: int, g) -> tuple[CubicalChain, CubicalChain]:
    m = grid.cells_per_axis[axis]
    if len(g) != m + 1 or any(g[i] > g[i + 1] for i in range(m)) or g[0] < 0 or g[-1] > m:
        raise GridError("vertex map must be monotone into the axis range")
    fz: dict[Cell, int] = {}
    hz: dict[Cell, int] = {}
    for c, v in z.coeffs.items():
        t = c.base[axis]
        if axis in c.dirs:
            for s in range(g[t], g[t + 1]):
                key = Cell(c.base[:axis] + (s,) + c.base[axis + 1 :], c.dirs)
                fz[key] = fz.get(key, 0) + v
            continue
        key = Cell(c.base[:axis] + (g[t],) + c.base[axis + 1 :], c.dirs)
        fz[key] = fz.get(key, 0) + v
        pos = sum(1 for d in c.dirs if d < axis)
        eps = -v if pos % 2 else v
        dirs = tuple(sorted(c.dirs + (axis,)))
        if g[t] < t:
            span, sgn = range(g[t], t), eps
        else:
            span, sgn = range(t, g[t]), -eps
        for s in span:
            key = Cell(c.base[:axis] + (s,) + c.base[axis + 1 :], dirs)
            hz[key] = hz.get(key, 0) + sgn
    return CubicalChain(z.p, fz), CubicalChain(z.p + 1, hz)


def _drop(z: CubicalChain, axis: int) -> CubicalChain:
    out = {}
    for c, v in z.coeffs.items():
        dirs = tuple(d - (d > axis) for d in c.dirs)
        out[Cell(c.base[:axis] + c.base[axis + 1 :], dirs)] = v
    return CubicalChain(z.p, out)


def _lift(z: CubicalChain, axis: int, at: int) -> CubicalChain:
    out = {}
    for c, v in z.coeffs.items():
        dirs = tuple(d + (d >= axis) for d in c.dirs)
        out[Cell(c.base[:axis] + (at,) + c.base[axis:], dirs)] = v
    return CubicalChain(z.p, out)


def _fill(z: CubicalChain, grid: CubicalGrid) -> CubicalChain:
    if z.is_zero():
        return CubicalChain.zero(z.p + 1)
    best = None
    for a in range(grid.n):
        m = grid.cells_per_axis[a]
        for wall in (0, m):
            far = m - wall
            g = [wall] * (m + 1)
            _, y = sweep(z, grid, a, g)
            if z.p > 0:
                bz = boundary(z)
                w = CubicalChain(z.p - 1, {c: v for c, v in bz.coeffs.items() if a not in c.dirs and c.base[a] == far})
                cross = grid.drop_axis(a)
                w = rel(_drop(w, a), cross)
                if not w.is_zero():
                    u = _fill(w, cross)
                    _, hu = sweep(_lift(u, a, far), grid, a, g)
                    y = y - hu
            y = rel(y, grid)
            vol = volume(y, grid)
            if best is None or vol < best[0]:
                best = (vol, y)
    return best[1]


@dataclass(frozen=True)
class FillResult:
    chain: CubicalChain
    volume: float
    cycle_volume: float
    profile_bound: float | None

    @property
    def ratio(self) -> float | None:
        if not self.profile_bound:
            return None
        return self.volume / self.profile_bound


def fill_relative_cycle(z: CubicalChain, grid: CubicalGrid, c: float = 1.0, C: float = 1.0) -> FillResult:
    """A relative filling y with rel(dy) = rel(z), by sweeping z to a wall.

    The trace left on the far wall is a relative cycle of the cross-section; it is
    filled recursively and swept across, which is the product-structure step of the
    slicing argument. Every axis and both walls are tried and the smallest
    filling kept, so a cycle lying in a coordinate slab is filled inside it.
    """
    check_chain(z, grid)
    if not 0 <= z.p <= grid.n - 1:
        raise DomainError(f"can only fill relative p-cycles with p <= {grid.n - 1}")
    if not is_relative_cycle(z, grid):
        raise DomainError("input is not a relative cycle")
    z = rel(z, grid)
    y = _fill(z, grid)
    if not rel(boundary(y) - z, grid).is_zero():
        raise InvariantViolation("filling boundary does not match the cycle")
    vz = volume(z, grid)
    prof = None
    if z.p >= 1 and vz > 0:
        prof = profile_upper(grid.dims, z.p, vz, c, C).bound
    return FillResult(y, volume(y, grid), vz, prof)


@dataclass(frozen=True)
class PushResult:
    z_prime: CubicalChain
    homology: CubicalChain
    scale: float
    volume_ratio: float | None
    homology_ratio: float | None


def refinement_maps(fine: CubicalGrid, coarse: CubicalGrid, rtol: float = 1e-9):
    """Per-axis snap maps sending each fine vertex to its nearer coarse vertex (midpoints go up)."""
    if fine.n != coarse.n:
        raise GridError("grids have different dimension")
    maps = []
    for a in range(fine.n):
        fc, cc = fine.coords[a], coarse.coords[a]
        scale = max(fc[-1], cc[-1])
        idx = []
        for x in cc:
            hit = [i for i, y in enumerate(fc) if abs(x - y) <= rtol * scale]
            if not hit:
                raise GridError(f"axis {a}: coarse vertex {x} is not a fine vertex")
            idx.append(hit[0])
        if idx[0] != 0 or idx[-1] != len(fc) - 1:
            raise GridError(f"axis {a}: grids span different lengths")
        g = []
        j = 0
        for t, x in enumerate(fc):
            while j + 1 < len(idx) - 1 and t >= idx[j + 1]:
                j += 1
            lo, hi = idx[j], idx[j + 1]
            mid = 0.5 * (fc[lo] + fc[hi])
            g.append(lo if x < mid - rtol * scale else hi)
        g[0], g[-1] = 0, len(fc) - 1
        maps.append(g)
    return maps


def ff_push(z: CubicalChain, fine: CubicalGrid, coarse: CubicalGrid, k: int | None = None) -> PushResult:
    """Push a relative k-cycle of the fine grid into the coarse k-skeleton.

    Each axis is snapped in turn to the nearer coarse vertex (deterministic centre
    rule). Returns z' and a homology chain h with rel(dh) = rel(z' - z).
    """
    check_chain(z, fine)
    if k is not None and z.p != k:
        raise DomainError(f"expected a {k}-cycle, got dimension {z.p}")
    if not is_relative_cycle(z, fine):
        raise DomainError("input is not a relative cycle")
    maps = refinement_maps(fine, coarse)
    cur = z
    h = CubicalChain.zero(z.p + 1)
    for a, g in enumerate(maps):
        cur, ha = sweep(cur, fine, a, g)
        h = h - ha
    zp, h = rel(cur, fine), rel(h, fine)
    if not rel(boundary(h) - (zp - z), fine).is_zero():
        raise InvariantViolation("push homology does not bound z' - z")
    L = max(max(s) for s in coarse.spacings)
    vz = volume(z, fine)
    vr = volume(zp, fine) / vz if vz else None
    hr = volume(h, fine) / (L * vz) if vz else None
    return PushResult(zp, h, L, vr, hr)


def in_coarse_skeleton(z: CubicalChain, fine: CubicalGrid, coarse: CubicalGrid) -> bool:
    """Every fine cell lies inside a coarse cell of the same dimension."""
    maps = refinement_maps(fine, coarse)
    verts = [set(g) for g in maps]
    return all(all(c.base[a] in verts[a] for a in range(fine.n) if a not in c.dirs) for c in z.coeffs)
