"""Test complexes from cellular maps between block grids and target grids."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from ..chains.grid import Cell, CubicalChain, CubicalGrid, boundary, rel
from ..errors import DomainError
from ..rect import normalize
from .core import BlockComplex, CycleComplex


def _axis_image(phi, t: int, is_dir: bool):
    """Image of an axis factor: a vertex, or a signed run of unit intervals."""
    if not is_dir:
        return [(phi[t], False, 1)]
    a, b = phi[t], phi[t + 1]
    if a <= b:
        return [(s, True, 1) for s in range(a, b)]
    return [(s, True, -1) for s in range(b, a)]


def product_pushforward(F: Cell, maps) -> CubicalChain:
    """f#(F) for the product of per-axis vertex maps (cellular on each axis)."""
    factors = [_axis_image(maps[a], F.base[a], a in F.dirs) for a in range(len(maps))]
    out: dict[Cell, int] = {}
    for combo in product(*factors):
        base = tuple(s for s, _, _ in combo)
        dirs = tuple(a for a, (_, d, _) in enumerate(combo) if d)
        sign = 1
        for _, _, e in combo:
            sign *= e
        key = Cell(base, dirs)
        out[key] = out.get(key, 0) + sign
    return CubicalChain(len(F.dirs), out)


def cellular_complex(param: BlockComplex, target: CubicalGrid, maps, D: int = 1) -> CycleComplex:
    """D times the complex of a product cellular map R -> S.

    Each map sends 0..m_a to vertex indices 0..M_a and the ends to the ends,
    so boundary faces go to the boundary of S.
    """
    m, M = param.grid.cells_per_axis, target.cells_per_axis
    for a, phi in enumerate(maps):
        if len(phi) != m[a] + 1:
            raise DomainError(f"axis {a}: map needs {m[a] + 1} vertices")
        if phi[0] not in (0, M[a]) or phi[-1] not in (0, M[a]):
            raise DomainError(f"axis {a}: ends must land on the boundary")
        if any(not 0 <= v <= M[a] for v in phi):
            raise DomainError(f"axis {a}: vertex outside the target grid")
    assign = {}
    for p in range(param.n + 1):
        for F in param.faces(p):
            assign[F] = D * product_pushforward(F, maps)
    return CycleComplex(param, target, assign)


def linear_map(m: int, M: int):
    return [round(t * M / m) for t in range(m + 1)]


def zigzag_map(m: int, M: int, laps: int):
    """Vertex map going 0 -> M -> 0 ... across ``laps`` monotone passes (degree laps mod 2)."""
    if laps < 1:
        raise DomainError("laps must be >= 1")
    out = []
    for t in range(m + 1):
        s = t * laps / m
        lap = min(int(s), laps - 1)
        frac = s - lap
        v = frac if lap % 2 == 0 else 1 - frac
        out.append(int(round(v * M)))
    return out


def perturb(c: CycleComplex, rng: np.random.Generator, n_faces: int = 3, max_coef: int = 1) -> CycleComplex:
    """C + dh + h d for a random chain homotopy h supported on a few faces."""
    target, param = c.target, c.param
    h: dict[Cell, CubicalChain] = {}
    for p in range(param.n):
        faces = param.faces(p)
        cells = list(target.cells(p + 1))
        if not faces or not cells:
            continue
        for i in rng.choice(len(faces), size=min(n_faces, len(faces)), replace=False):
            cell = cells[int(rng.integers(len(cells)))]
            coef = int(rng.integers(1, max_coef + 1)) * (1 if rng.random() < 0.5 else -1)
            h[faces[int(i)]] = CubicalChain(p + 1, {cell: coef})

    def hx(x: CubicalChain) -> CubicalChain:
        out = CubicalChain.zero(x.p + 1)
        for F, v in x.coeffs.items():
            out = out + v * h.get(F, CubicalChain.zero(x.p + 1))
        return out

    assign = {}
    for p in range(param.n + 1):
        for F in param.faces(p):
            z = c.chain(F) + boundary(h.get(F, CubicalChain.zero(p + 1)))
            if p > 0:
                z = z + hx(param.face_boundary(F))
            assign[F] = rel(z, target)
    return CycleComplex(param, target, assign)


@dataclass(frozen=True)
class ComplexParams:
    R: tuple = (2.0, 2.0)
    S: tuple = (2.0, 2.0)
    j: int = 0
    L: float = 1.0
    target_cells: tuple | None = None
    D: int = 1
    laps: tuple | None = None
    seed: int = 0


def generate_test_complex(kind: str, params: ComplexParams | None = None, **kw) -> CycleComplex:
    """Build one of: identity, degree_D, scrunched, random_small.

    random_small jitters interior vertices of the linear map by at most a quarter
    step (only when the target grid is at least 4x finer) and adds a sparse
    chain-homotopy perturbation, so every face image stays small compared with S.
    """
    p = params or ComplexParams(**kw)
    R, S = normalize(p.R), normalize(p.S)
    if R.n != S.n:
        raise DomainError("R and S must have the same dimension")
    param = BlockComplex(R, p.j, p.L)
    m = param.grid.cells_per_axis
    M = tuple(p.target_cells) if p.target_cells is not None else m
    target = CubicalGrid.uniform(S.dims, M)
    if kind in ("identity", "degree_D"):
        maps = [linear_map(m[a], M[a]) for a in range(R.n)]
        return cellular_complex(param, target, maps, 1 if kind == "identity" else p.D)
    if kind == "scrunched":
        laps = p.laps or (1,) * R.n
        maps = [zigzag_map(m[a], M[a], laps[a]) for a in range(R.n)]
        return cellular_complex(param, target, maps, p.D)
    if kind == "random_small":
        rng = np.random.default_rng(p.seed)
        maps = []
        for a in range(R.n):
            phi = linear_map(m[a], M[a])
            step = M[a] // m[a]
            if step >= 4:
                jit = step // 4
                for t in range(1, m[a]):
                    phi[t] += int(rng.integers(-jit, jit + 1))
            maps.append(phi)
        return perturb(cellular_complex(param, target, maps, p.D), rng)
    raise DomainError(f"unknown complex kind {kind!r}")
