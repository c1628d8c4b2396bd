"""Tighten generated complexes and report any degree change as a counterexample.

Usage: python3 scripts/tighten_suite.py [--seeds 30] [--out counterexamples.json]
"""

import argparse
import json

from rectembed.complexes import degree, generate_test_complex, sweepout_scenario, tighten


def run(seeds: int):
    rows, bad = [], []
    for seed in range(seeds):
        for R in ((2.0, 2.0), (2.0, 2.0, 3.0)):
            n = len(R)
            for D in (1, 2):
                cells = tuple(4 * round(r) for r in R)
                c = generate_test_complex("random_small", R=R, S=(2.0,) * n, target_cells=cells, seed=seed, D=D)
                for k in range(1, n):
                    res = tighten(c, k, 0.5)
                    d = degree(res.complex)
                    rows.append((n, k, D, d, res.worst_ratio))
                    if d != D:
                        bad.append({"seed": seed, "R": R, "k": k, "degree": D, "after": d, "complex": c.to_json()})
    return rows, bad


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seeds", type=int, default=30)
    ap.add_argument("--out", default="counterexamples.json")
    a = ap.parse_args()
    rows, bad = run(a.seeds)
    worst = max(r[4] for r in rows)
    print(f"tightenings: {len(rows)}  degree changes: {len(bad)}  worst volume/schedule: {worst:.3f}")
    for f in (1, 3, 5):
        r = sweepout_scenario(f)
        print(f"fold {f}: glued {r.glued_volume:g}  bound {r.v_bound:g}  ratio {r.ratio:.4f}  "
              f"R1/S1 {r.predicted:g}  tracking {r.tracking:.2f}")
    if bad:
        with open(a.out, "w") as fh:
            json.dump(bad, fh)
        print(f"wrote {len(bad)} counterexamples to {a.out}")


if __name__ == "__main__":
    main()
