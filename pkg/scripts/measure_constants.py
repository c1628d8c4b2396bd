"""Measure the implementation constants pinned in rectembed.constants.

Runs the constructive filling against the profile shape on small random grids,
the snap push against its volume contracts, and the fold schedule against the
partial-product slack it needs. Prints one line per constant.
"""

from __future__ import annotations

import argparse
import math

import numpy as np

from rectembed.chains import CubicalGrid, ff_push, fill_relative_cycle, random_relative_cycle
from rectembed.embedding import fold_embed
from rectembed.errors import ConstructionError


def random_grid(rng, n, max_cells=3):
    """Up to max_cells slots per axis; per-axis scale spread 16x, spacing ratio <= 2 within an axis."""
    cells = [int(rng.integers(1, max_cells + 1)) for _ in range(n)]
    spacings = [tuple(2 ** float(rng.uniform(-2, 2)) * rng.uniform(1.0, 2.0, m)) for m in cells]
    return CubicalGrid(n, tuple(cells), tuple(spacings))


def fill_ratio(rng, trials):
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 4))
        g = random_grid(rng, n)
        p = int(rng.integers(1, n))
        z = random_relative_cycle(g, p, rng, n_cells=int(rng.integers(1, 5)))
        if z.is_zero():
            continue
        r = fill_relative_cycle(z, g)
        worst = max(worst, r.ratio)
    return worst


def push_ratios(rng, trials):
    vr = hr = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 4))
        coarse_m = [int(rng.integers(1, 3)) for _ in range(n)]
        ref = [int(rng.integers(1, 4)) for _ in range(n)]
        dims = [float(m) for m in coarse_m]
        coarse = CubicalGrid.uniform(dims, coarse_m)
        fine = CubicalGrid.uniform(dims, [m * r for m, r in zip(coarse_m, ref)])
        p = int(rng.integers(1, n))
        z = random_relative_cycle(fine, p, rng, n_cells=int(rng.integers(1, 5)))
        if z.is_zero():
            continue
        res = ff_push(z, fine, coarse, p)
        vr = max(vr, res.volume_ratio)
        hr = max(hr, res.homology_ratio)
    return vr, hr


def fold_case(rng, mu):
    """Sorted S and a sorted T with T_1..T_p >= mu^p S_1..S_p, tight at a random subset of p."""
    while True:
        n = int(rng.integers(2, 5))
        S = np.sort(np.exp(rng.uniform(-3, 3, n)))
        c = np.abs(rng.normal(0.0, 2.0, n)) * (rng.random(n) < 0.7)
        T = np.sort(S * mu * np.exp(np.diff(np.concatenate([[0.0], c]))))
        if np.all(np.cumsum(np.log(T)) >= np.cumsum(np.log(S * mu)) - 1e-12):
            return S, T


def fold_slack(rng, trials, grid=(1.0, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0, 16.0)):
    """Smallest per-axis inflation mu at which every sampled fold schedule succeeded."""
    seeds = [int(rng.integers(1 << 30)) for _ in range(trials)]
    for mu in grid:
        ok = True
        for seed in seeds:
            S, T = fold_case(np.random.default_rng(seed), mu)
            try:
                fold_embed(S, T)
            except ConstructionError:
                ok = False
                break
        if ok:
            return mu
    return math.inf


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=400)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    print(f"fill / profile ratio (max): {fill_ratio(rng, args.trials):.6g}")
    vr, hr = push_ratios(rng, args.trials)
    print(f"push volume ratio (max): {vr:.6g}")
    print(f"push homology ratio / L (max): {hr:.6g}")
    print(f"fold per-axis inflation needed: {fold_slack(rng, args.trials):.6g}")


if __name__ == "__main__":
    main()
