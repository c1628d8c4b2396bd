"""Exact minimal relative fillings for small instances.

GF(2) mode solves rel(dy) = z (mod 2) by elimination and enumerates the whole
affine solution space when its dimension is small, otherwise hands the same
problem to a MILP (dy - 2t = z). Integer mode searches y with coefficients in
[-2, 2] by MILP.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

from ..errors import CapacityError, DomainError
from .grid import Cell, CubicalChain, CubicalGrid, boundary, cell_measure, check_chain, is_relative_cycle, on_boundary, rel

DEFAULT_BUDGET = 5000
MAX_ENUM_DIM = 22
_CHUNK = 1 << 15


@dataclass(frozen=True)
class OracleResult:
    min_volume: float
    chain: CubicalChain
    method: str

    def __iter__(self):
        return iter((self.min_volume, self.chain))


def _system(z: CubicalChain, grid: CubicalGrid):
    vars_ = [c for c in grid.cells(z.p + 1) if not on_boundary(c, grid)]
    rows: dict[Cell, int] = {}
    entries = []
    for j, c in enumerate(vars_):
        for f, v in rel(boundary(CubicalChain(z.p + 1, {c: 1})), grid).coeffs.items():
            i = rows.setdefault(f, len(rows))
            entries.append((i, j, v))
    for f in z.coeffs:
        rows.setdefault(f, len(rows))
    D = np.zeros((len(rows), len(vars_)), dtype=np.int64)
    for i, j, v in entries:
        D[i, j] += v
    b = np.zeros(len(rows), dtype=np.int64)
    for f, v in z.coeffs.items():
        b[rows[f]] = v
    w = np.array([cell_measure(c, grid) for c in vars_])
    return vars_, D, b, w


def _gf2_solve(A: np.ndarray, b: np.ndarray):
    """Particular solution and null-space basis of A x = b over GF(2)."""
    A = A.copy() % 2
    b = b.copy() % 2
    m, n = A.shape
    M = np.concatenate([A, b[:, None]], axis=1).astype(np.uint8)
    pivots = []
    r = 0
    for col in range(n):
        if r >= m:
            break
        hit = np.nonzero(M[r:, col])[0]
        if hit.size == 0:
            continue
        piv = r + hit[0]
        if piv != r:
            M[[r, piv]] = M[[piv, r]]
        rows = np.nonzero(M[:, col])[0]
        rows = rows[rows != r]
        M[rows] ^= M[r]
        pivots.append(col)
        r += 1
    if np.any(M[r:, n]):
        return None, None
    x0 = np.zeros(n, dtype=np.uint8)
    for i, col in enumerate(pivots):
        x0[col] = M[i, n]
    free = [c for c in range(n) if c not in set(pivots)]
    N = np.zeros((len(free), n), dtype=np.uint8)
    for k, f in enumerate(free):
        N[k, f] = 1
        for i, col in enumerate(pivots):
            N[k, col] = M[i, f]
    return x0, N


def _enumerate(x0, N, w):
    d = N.shape[0]
    best_v, best_x = float(x0 @ w), x0
    total = 1 << d
    bits = np.arange(d, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        coef = ((idx[:, None] >> bits) & 1).astype(np.uint8)
        X = (coef @ N) % 2 ^ x0
        vols = X @ w
        i = int(np.argmin(vols))
        if vols[i] < best_v - 1e-12 * max(1.0, best_v):
            best_v, best_x = float(vols[i]), X[i].astype(np.uint8)
    return best_v, best_x


def _milp_gf2(D, b, w):
    A = np.abs(D) % 2
    m, n = A.shape
    bmod = b % 2
    ub_t = A.sum(axis=1) // 2 + 1
    c = np.concatenate([w, np.zeros(m)])
    M = np.concatenate([A, -2 * np.eye(m)], axis=1)
    res = milp(
        c,
        integrality=np.ones(n + m),
        bounds=Bounds(np.zeros(n + m), np.concatenate([np.ones(n), ub_t])),
        constraints=LinearConstraint(M, bmod, bmod),
        options={"mip_rel_gap": 0.0},
    )
    if not res.success:
        raise DomainError(f"GF(2) filling program failed: {res.message}")
    return np.round(res.x[:n]).astype(np.int64)


def _milp_int(D, b, w, bound):
    m, n = D.shape
    c = np.concatenate([w, w])
    M = np.concatenate([D, -D], axis=1)
    res = milp(
        c,
        integrality=np.ones(2 * n),
        bounds=Bounds(np.zeros(2 * n), np.full(2 * n, bound)),
        constraints=LinearConstraint(M, b, b),
        options={"mip_rel_gap": 0.0},
    )
    if not res.success:
        raise DomainError(f"no integer filling with coefficients in [-{bound}, {bound}]: {res.message}")
    x = np.round(res.x).astype(np.int64)
    return x[:n] - x[n:]


def minimal_filling_oracle(z: CubicalChain, grid: CubicalGrid, mode: str = "gf2", budget: int = DEFAULT_BUDGET,
                           coef_bound: int = 2) -> OracleResult:
    """Minimum-volume relative filling of z over mod-2 chains (default) or bounded integer chains."""
    check_chain(z, grid)
    if not is_relative_cycle(z, grid):
        raise DomainError("input is not a relative cycle")
    z = rel(z, grid)
    if z.is_zero():
        return OracleResult(0.0, CubicalChain.zero(z.p + 1), "trivial")
    vars_, D, b, w = _system(z, grid)
    if len(vars_) > budget:
        raise CapacityError(f"{len(vars_)} unknown cells exceed the oracle budget {budget}")
    if mode == "gf2":
        x0, N = _gf2_solve(np.abs(D), b)
        if x0 is None:
            raise DomainError("cycle has no mod-2 relative filling")
        if N.shape[0] <= MAX_ENUM_DIM:
            _, x = _enumerate(x0, N, w)
            method = "gf2-enumerate"
        else:
            x = _milp_gf2(D, b, w)
            method = "gf2-milp"
    elif mode == "int":
        x = _milp_int(D, b, w, coef_bound)
        method = "int-milp"
    else:
        raise ValueError(f"unknown oracle mode {mode!r}")
    y = CubicalChain(z.p + 1, {c: int(v) for c, v in zip(vars_, x) if v})
    vol = float(np.sum(np.abs(x) * w))
    return OracleResult(vol, y, method)
