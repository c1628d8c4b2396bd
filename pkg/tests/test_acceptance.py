"""Acceptance gate: one test and one PASS/FAIL line per criterion."""

import math
import time
from fractions import Fraction

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from rectembed.chains import CubicalChain, CubicalGrid, boundary, fill_relative_cycle, minimal_filling_oracle, random_relative_cycle, rel, volume
from rectembed.complexes import CycleComplex, build_homotopy, degree, generate_test_complex, glue, sweepout_scenario, tighten, top_class, validate
from rectembed.constants import C_IMPL
from rectembed.dilation import k_dilation_compound_oracle, k_dilation_linear
from rectembed.embedding import balance_linear, construct_embedding, verify_k_expanding
from rectembed.feasibility import check_inequalities, dilation_lower_bound, dilation_lower_bound_degree, select_j
from rectembed.isoperimetry import bound_at, profile_upper
from rectembed.rect import normalize


def report(n, ok, detail, elapsed=None, limit=None):
    if limit is not None and elapsed > limit:
        ok = False
        detail += f"; runtime {elapsed:.1f}s over {limit}s"
    t = "" if elapsed is None else f" [{elapsed:.1f}s]"
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}{t}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def test_criterion_1_singular_value_laws():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    worst_81 = worst_82 = worst_or = 0.0
    for _ in range(1000):
        r, c = rng.integers(2, 7, size=2)
        A = rng.standard_normal((r, c))
        m = min(r, c)
        dil = {k: k_dilation_linear(A, k) for k in range(1, m + 1)}
        for k in range(1, m + 1):
            o = k_dilation_compound_oracle(A, k)
            worst_or = max(worst_or, abs(dil[k] - o) / o)
            for l in range(k + 1, m + 1):
                worst_81 = max(worst_81, dil[l] ** (k / l) / dil[k] - 1)
        for j in range(1, m + 1):
            for k in range(j, m + 1):
                for l in range(k + 1, m + 1):
                    lhs = dil[j] ** ((l - k) / (l - j)) * dil[l] ** ((k - j) / (l - j))
                    worst_82 = max(worst_82, lhs / dil[k] - 1)
    ok = worst_81 <= 1e-9 and worst_82 <= 1e-9 and worst_or <= 1e-8
    report(1, ok, f"max excess power law {worst_81:.1e}, interpolation {worst_82:.1e}, oracle rel err {worst_or:.1e}",
           time.perf_counter() - t0, 10)


def test_criterion_2_k_equals_n_collapse():
    rng = np.random.default_rng(202)
    mismatches = 0
    for i in range(10_000):
        n = int(rng.integers(1, 7))
        S = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(1, 50, n), rng.integers(1, 50, n))]
        if i % 10 == 0:  # exact volume ties: move a factor between axes
            R = list(S)
            if n > 1:
                q = Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
                R[0], R[1] = R[0] * q, R[1] / q
        else:
            R = [Fraction(int(a), int(b)) for a, b in zip(rng.integers(1, 50, n), rng.integers(1, 50, n))]
        exact = math.prod(R) >= math.prod(S)
        got = check_inequalities([float(x) for x in S], [float(x) for x in R], n).passed
        mismatches += exact != got
    report(2, mismatches == 0, f"{mismatches} disagreements with exact volume comparison over 10^4 pairs")


def test_criterion_3_worked_example():
    bad = check_inequalities((1, 1, 1), (0.01, 10, 10), 2)
    flagged = (1, 3) in [(v.j, v.l) for v in bad.violations]
    good = check_inequalities((1, 1, 1), (0.1, 20, 20), 2)
    b = dilation_lower_bound((1, 1, 1), (0.1, 20, 20), 2)
    bd = dilation_lower_bound_degree((1, 1, 1), (0.1, 20, 20), 2, 1000)
    exact = math.sqrt(1000) / 2
    ok = (not bad.passed and flagged and good.passed and b.value == pytest.approx(0.5, rel=1e-12)
          and abs(bd.value - exact) <= 1e-9 * exact)
    report(3, ok, f"(1,3) flagged={flagged}, bound={b.value:.15g}, degree bound={bd.value:.12g}")


def _margin_instances(rng, count, margin=16.0):
    out = []
    while len(out) < count:
        n = int(rng.integers(2, 5))
        k = int(rng.integers(1, n + 1))
        S = normalize(np.exp(rng.uniform(-3, 3, n)))
        R = normalize(np.exp(rng.uniform(-2, 4, n)))
        # inclusions are trivial; keep instances that need scaling or folding
        if any(s > r for s, r in zip(S.dims, R.dims)) and check_inequalities(S, R, k, constant=margin).passed:
            out.append((S, R, k))
    return out


def test_criterion_4_construction_round_trip():
    t0 = time.perf_counter()
    rng = np.random.default_rng(404)
    failures, worst, samples = [], math.inf, math.inf
    for S, R, k in _margin_instances(rng, 100):
        try:
            m = construct_embedding(S, R, k, certify=False)
            rep = verify_k_expanding(m, k)
        except Exception as exc:  # any failure is a criterion failure
            failures.append((S.dims, R.dims, k, repr(exc)))
            continue
        worst = min(worst, rep.min_expansion)
        samples = min(samples, rep.n_samples)
        if not (rep.min_expansion >= 1 - 1e-9 and rep.contained and rep.injective and rep.n_samples >= 10_000):
            failures.append((S.dims, R.dims, k, rep.to_json()))
    report(4, not failures, f"{100 - len(failures)}/100 certified, min expansion {worst:.12g}, >= {samples} samples",
           time.perf_counter() - t0, 60)


def test_criterion_5_balance_invariants():
    rng = np.random.default_rng(505)
    done, bad = 0, []
    while done < 1000:
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n + 1))
        S, R = normalize(np.exp(rng.uniform(-3, 3, n))), normalize(np.exp(rng.uniform(-3, 3, n)))
        if not check_inequalities(S, R, k).passed:
            continue
        done += 1
        res = balance_linear(R, S, k)
        ok = res.c <= max(k - 1, 0)
        ok &= all(abs(k_dilation_linear(np.diag(st.factors), k) - 1) <= 1e-12 for st in res.stages)
        T = np.array(res.T_axes)
        lt, lr = math.fsum(np.log(T[:k])), math.fsum(np.log(R.dims[:k]))
        ok &= abs(lt - lr) <= 1e-12 * max(1.0, abs(lr))
        pt, ps = np.cumsum(np.log(res.T.dims)), np.cumsum(np.log(S.dims))
        ok &= bool(np.all(pt >= ps - 1e-12 * np.maximum(1, np.abs(ps))))
        if not ok:
            bad.append((S.dims, R.dims, k))
    report(5, not bad, f"{1000 - len(bad)}/1000 instances satisfy all balance invariants")


def test_criterion_6_block_side():
    rng = np.random.default_rng(606)
    done, bad = 0, 0
    while done < 1000:
        n = int(rng.integers(2, 7))
        k = int(rng.integers(1, n))
        S, R = normalize(np.exp(rng.uniform(-3, 3, n))), normalize(np.exp(rng.uniform(-3, 3, n)))
        if math.fsum(np.log(R.dims[:k])) < math.fsum(np.log(S.dims[:k])):
            continue
        done += 1
        sel = select_j(S, R, k, 1.0)
        bad += not sel.log_L <= math.log(R.dims[sel.j_star]) + 1e-12 * max(1.0, abs(sel.log_L))
    report(6, bad == 0, f"L <= R_(j*+1) on {1000 - bad}/1000 instances")


def test_criterion_7_isoperimetry():
    t0 = time.perf_counter()
    rng = np.random.default_rng(707)
    worst_gap = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 7))
        R = normalize(np.exp(rng.uniform(-2, 2, n)))
        for k in range(1, n):
            for j in range(k):
                a, b = bound_at(R, k, j, R.dims[j]), bound_at(R, k, j + 1, R.dims[j])
                worst_gap = max(worst_gap, abs(a - b) / max(a, b))
    mismatch = oracle_bad = profile_bad = 0
    worst_ratio = 0.0
    for _ in range(100):
        n = int(rng.integers(2, 4))
        m = tuple(int(x) for x in rng.integers(1, 4, n))
        g = CubicalGrid(n, m, tuple(tuple(rng.uniform(1.0, 2.0, mi)) for mi in m))
        p = int(rng.integers(1, n))
        z = random_relative_cycle(g, p, rng)
        r = fill_relative_cycle(z, g)
        mismatch += not rel(boundary(r.chain) - z, g).is_zero()
        oracle_bad += minimal_filling_oracle(z, g).min_volume > r.volume + 1e-12
        if r.cycle_volume > 0:
            bound = profile_upper(g.dims, p, r.cycle_volume).bound
            worst_ratio = max(worst_ratio, r.volume / bound)
            profile_bad += r.volume > C_IMPL * bound
    ok = worst_gap <= 1e-12 and mismatch == 0 and oracle_bad == 0 and profile_bad == 0
    report(7, ok, f"breakpoint gap {worst_gap:.1e}; boundary mismatches {mismatch}, oracle above constructive "
                  f"{oracle_bad}, over C_impl={C_IMPL:g} {profile_bad} (max ratio {worst_ratio:.2f})",
           time.perf_counter() - t0, 120)


def _suite():
    out = []
    for seed in range(30):
        for n, R in ((2, (2.0, 2.0)), (3, (2.0, 2.0, 3.0))):
            for D in (1, 2):
                cells = tuple(4 * round(r) for r in R)
                out.append(generate_test_complex("random_small", R=R, S=(2.0,) * n, target_cells=cells, seed=seed, D=D))
    out.append(generate_test_complex("identity"))
    out.append(generate_test_complex("degree_D", D=3))
    out.append(generate_test_complex("scrunched", R=(1.0, 4.0, 12.0), S=(2.0, 2.0, 2.0), j=1, L=2.0,
                                     target_cells=(2, 2, 2), laps=(1, 1, 3)))
    return out


def test_criterion_8_complex_laws():
    suite = _suite()
    glue_bad = sum(any(degree(glue(c, c.param.coarsen(l))) != degree(c) for l in range(c.param.j, c.param.n + 1))
                   for c in suite)
    rng = np.random.default_rng(808)
    class_bad = 0
    for _ in range(200):
        n = int(rng.integers(1, 4))
        m = tuple(int(x) for x in rng.integers(1, 4, n))
        g = CubicalGrid(n, m, tuple(tuple(float(v) for v in rng.integers(1, 3, mi)) for mi in m))
        D = int(rng.integers(-4, 5))
        z = CubicalChain(n, {c: D for c in g.cells(n)}) if D else CubicalChain.zero(n)
        exact_vol = abs(D) * math.prod(Fraction(x) for x in g.dims)
        class_bad += top_class(z, g) != D or Fraction(volume(z, g)) < exact_vol
    hom_bad = zero_bad = 0
    for c in suite[::4]:
        t = tighten(c, c.param.n - 1, 0.5).complex
        for a, b in ((c, t), (c, c)):
            h = build_homotopy(a, b)
            hom_bad += h.success and degree(a) != degree(b)
        if degree(c) == 1:
            h = build_homotopy(c, CycleComplex(c.param, c.target, {}))
            vol_s = math.prod(c.target.dims)
            zero_bad += h.success or h.failure_dimension != c.param.n or h.obstruction_volume < abs(h.obstruction) * vol_s - 1e-12
    ok = glue_bad == hom_bad == zero_bad == class_bad == 0
    report(8, ok, f"glue degree changes {glue_bad}/{len(suite)}, class-volume failures {class_bad}/200, "
                  f"homotopy degree mismatches {hom_bad}, missed obstructions {zero_bad}")


def test_criterion_9_tighten_suite():
    suite = [c for c in _suite()[:-3]]
    flips = []
    total = 0
    for c in suite:
        for k in range(1, c.param.n):
            total += 1
            t = tighten(c, k, 0.5).complex
            if degree(t) != degree(c) or not validate(t).valid:
                flips.append((c.param.n, k, degree(c)))
    reps = [sweepout_scenario(f) for f in (1, 3)]
    scen_ok = all(r.degree_after == 1 and r.glued_volume <= r.v_bound and r.tracking <= 4.0 for r in reps)
    ok = not flips and total >= 50 and scen_ok
    report(9, ok, f"degree preserved on {total - len(flips)}/{total} tightenings; scenario glued volume "
                  f"{[r.glued_volume for r in reps]} vs bound {[r.v_bound for r in reps]}, tracking {[r.tracking for r in reps]}")
