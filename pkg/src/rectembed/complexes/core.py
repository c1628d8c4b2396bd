"""Complexes of cycles parametrized by block decompositions of a rectangle.

The parameter complex is the relative cellular chain complex of a block grid
on R (faces in the outer boundary are dropped). A complex of cycles assigns to
each interior d-face a relative d-chain on a target grid over S, compatibly
with boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..chains.fill import fill_relative_cycle
from ..chains.grid import Cell, CubicalChain, CubicalGrid, boundary, on_boundary, rel, volume
from ..errors import DomainError, GridError, NotACycleError, TightenError
from ..rect import Rectangle, normalize


@dataclass(frozen=True)
class BlockComplex:
    """R cut into blocks R_1 x .. x R_j x L x .. x L (or R_1 x .. x R_l x L x .. with ``l``).

    Subdivided axes get round(R_i / L) equal slots, so the realized block side
    is R_i / m_i; ``adjust`` records realized side / L per axis.
    """

    R: Rectangle
    j: int
    L: float
    l: int | None = None
    grid: CubicalGrid = field(init=False, repr=False, compare=False)
    adjust: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        R = normalize(self.R)
        object.__setattr__(self, "R", R)
        n = R.n
        if not 0 <= self.j <= n:
            raise DomainError(f"j={self.j} outside [0, {n}]")
        if not (self.L > 0 and math.isfinite(self.L)):
            raise DomainError("block side L must be positive")
        whole = self.j if self.l is None else self.l
        if not self.j <= whole <= n:
            raise DomainError(f"l={self.l} outside [{self.j}, {n}]")
        m = [1 if i < whole else max(1, round(R.dims[i] / self.L)) for i in range(n)]
        adj = tuple(R.dims[i] / m[i] / self.L if i >= whole else 1.0 for i in range(n))
        grid = CubicalGrid(n, tuple(m), tuple((R.dims[i] / m[i],) * m[i] for i in range(n)))
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "adjust", adj)

    @property
    def n(self) -> int:
        return self.R.n

    def coarsen(self, l: int) -> "BlockComplex":
        return BlockComplex(self.R, self.j, self.L, l)

    def faces(self, p: int) -> list[Cell]:
        return [c for c in self.grid.cells(p) if not on_boundary(c, self.grid)]

    def face_boundary(self, F: Cell) -> CubicalChain:
        return rel(boundary(CubicalChain(len(F.dirs), {F: 1})), self.grid)

    def face_volume(self, F: Cell) -> float:
        return math.prod(self.grid.spacings[a][F.base[a]] for a in F.dirs)

    def to_json(self) -> dict:
        return {"R": list(self.R.dims), "j": self.j, "L": self.L, "l": self.l}

    @classmethod
    def from_json(cls, obj) -> "BlockComplex":
        return cls(normalize(obj["R"]), int(obj["j"]), float(obj["L"]), obj.get("l"))


@dataclass(frozen=True)
class CycleComplex:
    param: BlockComplex
    target: CubicalGrid
    assignment: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.param.n != self.target.n:
            raise GridError("parameter and target dimensions differ")
        clean = {}
        for F, z in dict(self.assignment).items():
            if z.p != len(F.dirs) and not z.is_zero():
                raise GridError(f"face {F} of dimension {len(F.dirs)} got a {z.p}-chain")
            z = rel(z, self.target)
            if not z.is_zero():
                clean[F] = z
        object.__setattr__(self, "assignment", clean)

    def chain(self, F: Cell) -> CubicalChain:
        return self.assignment.get(F, CubicalChain.zero(len(F.dirs)))

    def apply(self, x: CubicalChain) -> CubicalChain:
        """Extend linearly to a chain of parameter faces."""
        out = CubicalChain.zero(x.p)
        for F, v in x.coeffs.items():
            out = out + v * self.chain(F)
        return out

    def face_volumes(self, p: int) -> dict:
        return {F: volume(self.chain(F), self.target) for F in self.param.faces(p)}

    def to_json(self) -> dict:
        return {
            "param": self.param.to_json(),
            "target": self.target.to_json(),
            "faces": [{"base": list(F.base), "dirs": list(F.dirs), "chain": z.to_json()}
                      for F, z in sorted(self.assignment.items())],
        }

    @classmethod
    def from_json(cls, obj) -> "CycleComplex":
        return cls(
            BlockComplex.from_json(obj["param"]),
            CubicalGrid.from_json(obj["target"]),
            {Cell(tuple(f["base"]), tuple(f["dirs"])): CubicalChain.from_json(f["chain"]) for f in obj["faces"]},
        )


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violations: list
    checked: int


def validate(c: CycleComplex) -> ValidationReport:
    """Check d C(F) = C(d F) (relative to the boundary of S) on every interior face."""
    bad, checked = [], 0
    for p in range(1, c.param.n + 1):
        for F in c.param.faces(p):
            checked += 1
            lhs = rel(boundary(c.chain(F)), c.target)
            rhs = c.apply(c.param.face_boundary(F))
            if not rel(lhs - rhs, c.target).is_zero():
                bad.append(F)
    return ValidationReport(not bad, bad, checked)


def top_class(z: CubicalChain, grid: CubicalGrid) -> int:
    """The constant coefficient of a relative top-dimensional cycle (its class)."""
    if z.is_zero():
        return 0
    if z.p != grid.n:
        raise NotACycleError(f"expected an {grid.n}-chain")
    vals = set(z.coeffs.values())
    total = math.prod(grid.cells_per_axis)
    if len(vals) != 1 or len(z.coeffs) != total:
        raise NotACycleError("top chain does not have a constant coefficient")
    return vals.pop()


def degree(c: CycleComplex) -> int:
    """Image of the fundamental class (sum of top faces) as a multiple of S's."""
    total = CubicalChain.zero(c.param.n)
    for F in c.param.faces(c.param.n):
        total = total + c.chain(F)
    return top_class(rel(total, c.target), c.target)


def _refine_index(fine: CubicalGrid, coarse: CubicalGrid):
    maps = []
    for a in range(fine.n):
        fc, cc = fine.coords[a], coarse.coords[a]
        idx = []
        for x in cc:
            hit = [i for i, y in enumerate(fc) if abs(x - y) <= 1e-9 * max(fc[-1], 1.0)]
            if not hit:
                raise GridError(f"axis {a}: coarse vertex {x} is not a block vertex of the finer complex")
            idx.append(hit[0])
        maps.append(idx)
    return maps


def subdivide_face(F: Cell, idx) -> list[Cell]:
    """Fine faces whose union is the coarse face F."""
    from itertools import product

    ranges = []
    for a, t in enumerate(F.base):
        ranges.append(range(idx[a][t], idx[a][t + 1]) if a in F.dirs else (idx[a][t],))
    return [Cell(tuple(b), F.dirs) for b in product(*ranges)]


def glue(c: CycleComplex, coarse: BlockComplex) -> CycleComplex:
    """C+(F) = sum of C(F_i) over the faces F_i of c's complex making up F."""
    if coarse.R != c.param.R:
        raise GridError("coarse decomposition is of a different rectangle")
    idx = _refine_index(c.param.grid, coarse.grid)
    out = {}
    for p in range(coarse.n + 1):
        for F in coarse.faces(p):
            acc = CubicalChain.zero(p)
            for f in subdivide_face(F, idx):
                acc = acc + c.chain(f)
            out[F] = acc
    g = CycleComplex(coarse, c.target, out)
    if degree(g) != degree(c):
        raise AssertionError("gluing changed the degree")
    return g


def threshold(S_dims, j: int, p: int, delta: float, const: float = 1.0) -> float:
    """delta * const * S_1..S_j * S_j^(p-j), with S_0 read as S_1 when j = 0."""
    S = sorted(S_dims)
    sj = S[j - 1] if j > 0 else S[0]
    return delta * const * math.prod(S[:j]) * sj ** (p - j)


@dataclass(frozen=True)
class FaceReport:
    face: Cell
    p: int
    volume: float
    threshold: float


@dataclass(frozen=True)
class TightenResult:
    complex: CycleComplex
    faces: list

    @property
    def worst_ratio(self) -> float:
        return max((f.volume / f.threshold for f in self.faces), default=0.0)


def tighten(c0: CycleComplex, k: int, delta: float, budget: float | None = None) -> TightenResult:
    """Keep c0 on faces of dimension <= k and refill every higher face from its boundary."""
    n = c0.param.n
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside [1, {n}]")
    new = {F: z for F, z in c0.assignment.items() if len(F.dirs) <= k}
    cur = CycleComplex(c0.param, c0.target, new)
    report = []
    for p in range(k + 1, n + 1):
        thr = threshold(c0.target.dims, c0.param.j, p, delta)
        for F in c0.param.faces(p):
            cyc = rel(cur.apply(c0.param.face_boundary(F)), c0.target)
            if cyc.is_zero():
                y = CubicalChain.zero(p)
            else:
                try:
                    y = fill_relative_cycle(cyc, c0.target).chain
                except Exception as exc:  # capacity or invariant failures name the face
                    raise TightenError(f"filling failed on face {F} (dimension {p}): {exc}", F, p) from exc
            vol = volume(y, c0.target)
            if budget is not None and vol > budget:
                raise TightenError(f"face {F} (dimension {p}) needs volume {vol} > budget {budget}", F, p)
            new[F] = y
            report.append(FaceReport(F, p, vol, thr))
        cur = CycleComplex(c0.param, c0.target, new)
    return TightenResult(cur, report)


@dataclass(frozen=True)
class HomotopyCertificate:
    success: bool
    prisms: dict
    failure_face: Cell | None = None
    failure_dimension: int | None = None
    obstruction: int = 0
    obstruction_volume: float = 0.0
    threshold_violations: list = field(default_factory=list)


def build_homotopy(c0: CycleComplex, c1: CycleComplex, thresholds=None, c_test: float | None = None) -> HomotopyCertificate:
    """Prism chains H(F) with dH(F) = H(dF) + (-1)^p (C1(F) - C0(F)), skeleton by skeleton.

    Faces of dimension < n are always fillable below the top dimension; a top face
    whose prism boundary is a nonzero relative n-cycle is an exact obstruction of
    class D and volume |D| Vol(S).
    """
    from ..constants import C_TEST

    if c0.param != c1.param or c0.target != c1.target:
        raise GridError("complexes live on different parameter or target grids")
    param, target, n = c0.param, c0.target, c0.param.n
    S = sorted(target.dims)
    ct = C_TEST if c_test is None else c_test
    if thresholds is None:
        thresholds = {p: ct * math.prod(S[:p]) for p in range(1, n + 1)}
    prisms: dict[Cell, CubicalChain] = {}
    over = []

    def H(x: CubicalChain) -> CubicalChain:
        out = CubicalChain.zero(x.p + 1)
        for F, v in x.coeffs.items():
            out = out + v * prisms.get(F, CubicalChain.zero(x.p + 1))
        return out

    for p in range(n + 1):
        sign = -1 if p % 2 else 1
        for F in param.faces(p):
            diff = c1.chain(F) - c0.chain(F)
            tgt = rel(sign * diff + (H(param.face_boundary(F)) if p > 0 else CubicalChain.zero(p)), target)
            if p == n:
                if not tgt.is_zero():
                    D = top_class(tgt, target)
                    return HomotopyCertificate(False, prisms, F, n, D, abs(D) * math.prod(target.dims), over)
                continue
            y = fill_relative_cycle(tgt, target).chain if not tgt.is_zero() else CubicalChain.zero(p + 1)
            prisms[F] = y
            vol = volume(y, target)
            lim = thresholds.get(p + 1, math.inf)
            if vol > lim:
                over.append((F, p + 1, vol, lim))
    if degree(c0) != degree(c1):
        raise AssertionError("homotopy built between complexes of different degree")
    return HomotopyCertificate(True, prisms, threshold_violations=over)
