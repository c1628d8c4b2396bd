"""Discrete j=1, k=2, l=3 sweepout scenario: scrunch, tighten, glue, compare."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..chains.grid import CubicalGrid, volume
from ..constants import C_IMPL
from ..rect import normalize
from .core import BlockComplex, degree, glue, tighten
from .generate import cellular_complex, linear_map, zigzag_map


def block_side(R, S, j: int, k: int, delta: float) -> float:
    """L solving R_1..R_j L^(k-j) = delta S_1..S_j S_j^(k-j)."""
    R, S = normalize(R).dims, normalize(S).dims
    sj = S[j - 1] if j > 0 else S[0]
    rhs = delta * math.prod(S[:j]) * sj ** (k - j)
    return (rhs / math.prod(R[:j])) ** (1.0 / (k - j))


def v_bound(R, S, j: int, k: int, l: int, p: int, const: float = C_IMPL) -> float:
    """const * [(R_1..R_j)/(S_1..S_j)]^((l-k)/(k-j)) * R_1..R_l * S_j^(p-l)."""
    R, S = normalize(R).dims, normalize(S).dims
    q = math.prod(R[:j]) / math.prod(S[:j])
    sj = S[j - 1] if j > 0 else S[0]
    return const * q ** ((l - k) / (k - j)) * math.prod(R[:l]) * sj ** (p - l)


@dataclass(frozen=True)
class ScenarioReport:
    fold: int
    R: tuple
    S: tuple
    L: float
    degree_before: int
    degree_after: int
    degree_glued: int
    glued_volume: float
    v_bound: float
    ratio: float
    predicted: float
    k_volume_before: float
    k_volume_after: float
    worst_schedule_ratio: float

    @property
    def tracking(self) -> float:
        """Multiplicative distance between the measured and predicted ratios."""
        return max(self.ratio / self.predicted, self.predicted / self.ratio)

    def to_json(self) -> dict:
        return {**{k: getattr(self, k) for k in self.__dataclass_fields__}, "tracking": self.tracking}


def sweepout_scenario(fold: int = 1, S=(2.0, 2.0, 2.0), R1: float = 1.0, delta: float = 0.5,
                      target_cells=(2, 2, 2)) -> ScenarioReport:
    """S=(2,2,2), R=(R1, 4, 4*fold); slices along the long axis zigzag ``fold`` times.

    The parameter complex uses j=1 blocks; the top faces are tightened with k=2
    and glued with l=3 to a single face carrying the whole sweepout.
    """
    j, k, l = 1, 2, 3
    S = normalize(S)
    R = normalize((R1, 4.0, 4.0 * fold))
    L = block_side(R, S, j, k, delta)
    param = BlockComplex(R, j, L)
    target = CubicalGrid.uniform(S.dims, target_cells)
    m, M = param.grid.cells_per_axis, target.cells_per_axis
    maps = [linear_map(m[0], M[0]), linear_map(m[1], M[1]), zigzag_map(m[2], M[2], fold)]
    c0 = cellular_complex(param, target, maps)
    res = tighten(c0, k, delta)
    c1 = res.complex
    g = glue(c1, param.coarsen(l))
    top = param.coarsen(l).faces(3)
    gvol = sum(volume(g.chain(F), target) for F in top)
    kv0 = sum(volume(c0.chain(F), target) for F in param.faces(k))
    kv1 = sum(volume(c1.chain(F), target) for F in param.faces(k))
    return ScenarioReport(
        fold, R.dims, S.dims, L, degree(c0), degree(c1), degree(g), gvol,
        v_bound(R, S, j, k, l, 3), gvol / math.prod(R.dims[:l]), R.dims[0] / S.dims[0],
        kv0, kv1, res.worst_ratio,
    )
