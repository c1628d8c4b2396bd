"""Random relative cycles for experiments and property tests."""

from __future__ import annotations

import numpy as np

from .grid import CubicalChain, CubicalGrid, boundary, rel


def random_chain(grid: CubicalGrid, p: int, rng: np.random.Generator, n_cells: int = 4, max_coef: int = 2) -> CubicalChain:
    cells = list(grid.cells(p))
    pick = rng.choice(len(cells), size=min(n_cells, len(cells)), replace=False)
    coefs = rng.integers(1, max_coef + 1, size=len(pick)) * rng.choice([-1, 1], size=len(pick))
    return CubicalChain.from_cells(p, ((cells[i], int(v)) for i, v in zip(pick, coefs)))


def random_relative_cycle(grid: CubicalGrid, p: int, rng: np.random.Generator, n_cells: int = 3,
                          max_coef: int = 2, tries: int = 100) -> CubicalChain:
    """rel(dy) for a random (p+1)-chain y; below the top dimension every relative cycle has this form."""
    for _ in range(tries):
        z = rel(boundary(random_chain(grid, p + 1, rng, n_cells, max_coef)), grid)
        if not z.is_zero():
            return z
    return z
